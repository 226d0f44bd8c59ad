#include "dvar/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "dvar/errors.hpp"
#include "dvar/geometry.hpp"
#include "dvar/quadrature.hpp"

namespace dvar {

const char* to_string(CopulaFamily f) {
    switch (f) {
        case CopulaFamily::clayton: return "clayton";
        case CopulaFamily::frank: return "frank";
        case CopulaFamily::independence: return "independence";
    }
    return "?";
}

CopulaFamily parse_family(std::string_view s) {
    if (s == "clayton") return CopulaFamily::clayton;
    if (s == "frank") return CopulaFamily::frank;
    if (s == "independence") return CopulaFamily::independence;
    throw DomainError("unknown copula family '" + std::string(s) + "'");
}

ArchimedeanModel::ArchimedeanModel(CopulaFamily family, double beta)
    : family_(family), beta_(beta) {
    switch (family_) {
        case CopulaFamily::clayton:
            if (!(beta_ >= -1.0) || beta_ == 0.0 || !std::isfinite(beta_))
                throw DomainError("Clayton parameter must lie in [-1,0) or (0,inf)");
            break;
        case CopulaFamily::frank:
            if (beta_ == 0.0 || !std::isfinite(beta_))
                throw DomainError("Frank parameter must be finite and nonzero");
            break;
        case CopulaFamily::independence: beta_ = 0.0; break;
    }
}

double ArchimedeanModel::phi(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("generator argument must lie in [0,1]");
    switch (family_) {
        case CopulaFamily::independence: return -std::log(t);
        case CopulaFamily::clayton:
            if (t == 0.0) return beta_ > 0 ? std::numeric_limits<double>::infinity() : -1.0 / beta_;
            return std::expm1(-beta_ * std::log(t)) / beta_;
        case CopulaFamily::frank: return -std::log(std::expm1(-beta_ * t) / std::expm1(-beta_));
    }
    return 0.0;
}

double ArchimedeanModel::phi_inv(double s) const {
    if (!(s >= 0.0)) throw DomainError("generator inverse argument must be nonnegative");
    switch (family_) {
        case CopulaFamily::independence: return std::exp(-s);
        case CopulaFamily::clayton: {
            const double bs = beta_ * s;
            if (bs <= -1.0) return 0.0;
            if (std::isinf(s)) return 0.0;
            return std::exp(-std::log1p(bs) / beta_);
        }
        case CopulaFamily::frank: return -std::log1p(std::expm1(-beta_) * std::exp(-s)) / beta_;
    }
    return 0.0;
}

double ArchimedeanModel::cdf(std::span<const double> v) const {
    double s = 0.0;
    for (double x : v) {
        if (x <= 0.0) return 0.0;
        s += phi(std::min(x, 1.0));
    }
    return phi_inv(s);
}

namespace {

void check_level(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("alpha must lie in (0,1), got " + std::to_string(alpha));
}

void check_dim(int n) {
    if (n < 1) throw DomainError("dimension must be >= 1");
}

double finite_or_throw(double v, const char* what) {
    if (!std::isfinite(v)) throw NumericError(std::string(what) + ": generator evaluation overflow");
    return v;
}

}  // namespace

double archimedean_var_lower(const ArchimedeanModel& model, int n, double alpha) {
    check_level(alpha);
    check_dim(n);
    const double g = finite_or_throw(model.phi(1.0 - alpha), "archimedean_var_lower");
    return finite_or_throw(model.phi_inv(g / n), "archimedean_var_lower");
}

double archimedean_var_upper(const ArchimedeanModel& model, int n, double alpha) {
    check_level(alpha);
    check_dim(n);
    const double g = finite_or_throw(model.phi(alpha), "archimedean_var_upper");
    return 1.0 - finite_or_throw(model.phi_inv(g / n), "archimedean_var_upper");
}

const char* to_string(ClaytonColumn c) {
    switch (c) {
        case ClaytonColumn::directional_X: return "directional_X";
        case ClaytonColumn::directional_1mX: return "directional_1mX";
        case ClaytonColumn::bernardino_X: return "bernardino_X";
        case ClaytonColumn::bernardino_1mX: return "bernardino_1mX";
    }
    return "?";
}

ClaytonColumn parse_clayton_column(std::string_view s) {
    for (auto c : {ClaytonColumn::directional_X, ClaytonColumn::directional_1mX,
                   ClaytonColumn::bernardino_X, ClaytonColumn::bernardino_1mX})
        if (s == to_string(c)) return c;
    throw DomainError("unknown table column '" + std::string(s) + "'");
}

namespace {

double bernardino_lower(double beta, double a) {
    const double ab = std::pow(a, beta);
    return beta / (beta - 1.0) * (ab - a) / (ab - 1.0);
}

}  // namespace

double clayton_table(double beta, double alpha, int n, ClaytonColumn which) {
    check_level(alpha);
    check_dim(n);
    const auto model = ArchimedeanModel::clayton(beta);
    switch (which) {
        case ClaytonColumn::directional_X: return archimedean_var_lower(model, n, 1.0 - alpha);
        case ClaytonColumn::directional_1mX: return archimedean_var_upper(model, n, 1.0 - alpha);
        case ClaytonColumn::bernardino_X:
        case ClaytonColumn::bernardino_1mX:
            if (n != 2) throw Unsupported("benchmark columns are defined for n = 2 only");
            if (beta == 1.0) throw DomainError("benchmark column has a pole at beta = 1");
            return which == ClaytonColumn::bernardino_X ? bernardino_lower(beta, alpha)
                                                        : 1.0 - bernardino_lower(beta, 1.0 - alpha);
    }
    return 0.0;
}

double clayton_directional_printed(double beta, double alpha, int n) {
    check_level(alpha);
    check_dim(n);
    return std::pow((1.0 + std::pow(alpha, -beta)) / n, -1.0 / beta);
}

double frank_density(double beta, double v1, double v2) {
    if (beta == 0.0) throw DomainError("Frank density needs beta != 0; use the independence family");
    const double a = std::expm1(-beta * v1);
    const double b = std::expm1(-beta * v2);
    const double d = std::expm1(-beta);
    const double den = a * b + d;
    return -beta * d * std::exp(-beta * (v1 + v2)) / (den * den);
}

Density2 independence_density() {
    return [](double, double) { return 1.0; };
}

Density2 frank_density_fn(double beta) {
    if (beta == 0.0) throw DomainError("Frank density needs beta != 0; use the independence family");
    return [beta](double s, double t) { return frank_density(beta, s, t); };
}

namespace {

// Quadrature state that is fixed for a problem: the frame for u and either
// the triangle rule or the density tabulated on the tensor grid.
class QuadratureEngine {
public:
    explicit QuadratureEngine(const BivariateDirectionalProblem& p)
        : problem_(p), frame_(rotation_frame(Direction::from_angle(p.theta))) {
        if (!p.density) throw DomainError("bivariate problem has no density");
        if (p.scheme == QuadratureScheme::polygon) {
            rule_ = gauss_legendre_unit(p.panel_nodes);
        } else {
            rule_ = gauss_legendre_unit(p.tensor_nodes);
            const std::size_t k = rule_.size();
            grid_.resize(k * k);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j)
                    grid_[i * k + j] = rule_.weights[i] * rule_.weights[j] *
                                       p.density(rule_.nodes[i], rule_.nodes[j]);
        }
    }

    double prob(double x1, double x2) const {
        const Matrix& r = frame_.matrix();
        if (problem_.scheme == QuadratureScheme::polygon) {
            std::vector<Point2> poly{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
            for (std::size_t k = 0; k < 2 && poly.size() >= 3; ++k)
                poly = clip_half_plane(poly, {r(k, 0), r(k, 1)}, {x1, x2});
            return integrate_polygon(poly, problem_.density, rule_);
        }
        const std::size_t k = rule_.size();
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double d1 = rule_.nodes[i] - x1;
            for (std::size_t j = 0; j < k; ++j) {
                const double d2 = rule_.nodes[j] - x2;
                if (r(0, 0) * d1 + r(0, 1) * d2 >= 0.0 && r(1, 0) * d1 + r(1, 1) * d2 >= 0.0)
                    s += grid_[i * k + j];
            }
        }
        return s;
    }

    double total_mass() const {
        if (problem_.scheme == QuadratureScheme::polygon)
            return integrate_polygon({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}},
                                     problem_.density, rule_);
        double s = 0.0;
        for (double v : grid_) s += v;
        return s;
    }

    const RotationFrame& frame() const { return frame_; }

private:
    const BivariateDirectionalProblem& problem_;
    RotationFrame frame_;
    GaussRule rule_;
    std::vector<double> grid_;
};

}  // namespace

double bivariate_orthant_prob(const BivariateDirectionalProblem& problem, double x1, double x2) {
    return QuadratureEngine(problem).prob(x1, x2);
}

double bivariate_total_mass(const BivariateDirectionalProblem& problem) {
    return QuadratureEngine(problem).total_mass();
}

BivariateResult bivariate_directional_var(const BivariateDirectionalProblem& problem) {
    check_level(problem.alpha);
    if (!(problem.tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
    const QuadratureEngine engine(problem);
    const double mass = engine.total_mass();
    if (std::abs(mass - 1.0) > 1e-6)
        throw DomainError("density integrates to " + std::to_string(mass) + ", not 1");

    const auto u = engine.frame().direction().coords();
    auto prob_at = [&](double lambda) {
        return engine.prob(0.5 + lambda * u[0], 0.5 + lambda * u[1]);
    };

    // Beyond |lambda| = 1 the quadrant either covers or misses the whole square.
    double lo = -1.5;
    double hi = 1.5;
    const double p_lo = prob_at(lo);
    const double p_hi = prob_at(hi);
    if (!(p_lo >= problem.alpha && p_hi <= problem.alpha))
        throw NoSolution("alpha=" + std::to_string(problem.alpha) + " is not attained on the ray",
                         p_hi, p_lo);

    double mid = 0.0;
    double pm = 0.0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        pm = prob_at(mid);
        if (std::abs(pm - problem.alpha) <= problem.tol) break;
        if (pm > problem.alpha)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13) break;
    }
    return {{0.5 + mid * u[0], 0.5 + mid * u[1]}, mid, pm};
}

Sample sample_clayton(double beta, int n, std::size_t m, std::uint64_t seed) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw Unsupported("Clayton sampler supports beta > 0 only");
    check_dim(n);
    if (m == 0) throw DomainError("sample size must be >= 1");
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> frailty(1.0 / beta, 1.0);
    std::exponential_distribution<double> expo(1.0);
    const auto nn = static_cast<std::size_t>(n);
    std::vector<double> data(m * nn);
    for (std::size_t i = 0; i < m; ++i) {
        const double v = frailty(rng);
        for (std::size_t k = 0; k < nn; ++k)
            data[i * nn + k] = std::exp(-std::log1p(expo(rng) / v) / beta);
    }
    return Sample(m, nn, std::move(data));
}

Sample sample_frank(double beta, std::size_t m, std::uint64_t seed) {
    if (beta == 0.0 || !std::isfinite(beta))
        throw DomainError("Frank parameter must be finite and nonzero");
    if (m == 0) throw DomainError("sample size must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double d = std::expm1(-beta);
    std::vector<double> data(m * 2);
    for (std::size_t i = 0; i < m; ++i) {
        const double u = unif(rng);
        const double w = unif(rng);
        // Invert the conditional distribution dC/du(u, v) = w.
        const double b = w * d / (w + (1.0 - w) * std::exp(-beta * u));
        data[i * 2] = u;
        data[i * 2 + 1] = std::clamp(-std::log1p(b) / beta, 0.0, 1.0);
    }
    return Sample(m, 2, std::move(data));
}

Sample sample_uniform(int n, std::size_t m, std::uint64_t seed) {
    check_dim(n);
    if (m == 0) throw DomainError("sample size must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const auto nn = static_cast<std::size_t>(n);
    std::vector<double> data(m * nn);
    for (double& v : data) v = unif(rng);
    return Sample(m, nn, std::move(data));
}

}  // namespace dvar
