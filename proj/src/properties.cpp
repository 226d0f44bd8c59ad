#include "dvar/properties.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>

#include "dvar/copula.hpp"
#include "dvar/errors.hpp"
#include "dvar/estimator.hpp"
#include "dvar/geometry.hpp"
#include "dvar/parallel.hpp"
#include "dvar/simulate.hpp"

namespace dvar {

std::size_t SuiteReport::passed() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.passed; }));
}

double SuiteReport::pass_rate() const {
    if (checks.empty()) return 0.0;
    return static_cast<double>(passed()) / static_cast<double>(checks.size());
}

bool SuiteReport::ok() const { return !checks.empty() && pass_rate() >= required_rate; }

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"P1", "P2", "P3",       "P4",   "P5",
                                                "P6", "P7", "marginal", "eq15", "bound"};
    return names;
}

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double max_abs(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

struct Instance {
    std::uint64_t seed;
    std::size_t n;
    Sample sample;
    Direction u;
    double alpha;
};

// Gaussian sample with a random covariance A A' + 0.1 I and random mean.
Sample random_gaussian(std::size_t n, std::size_t m, std::mt19937_64& rng) {
    std::normal_distribution<double> z;
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = z(rng);
    Matrix sigma = a * a.transpose();
    for (std::size_t i = 0; i < n; ++i) sigma(i, i) += 0.1;
    std::vector<double> mu(n);
    for (double& v : mu) v = 2.0 * z(rng);
    return sample_mvnormal(mu, sigma, m, rng());
}

Direction random_direction(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> z;
    std::vector<double> v(n);
    for (double& x : v) x = z(rng);
    return Direction::normalized(std::move(v));
}

// Gram-Schmidt on a Gaussian matrix.
Matrix random_orthogonal(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> z;
    Matrix q(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<double> v(n);
        for (double& x : v) x = z(rng);
        for (std::size_t p = 0; p < r; ++p) {
            double d = 0.0;
            for (std::size_t c = 0; c < n; ++c) d += v[c] * q(p, c);
            for (std::size_t c = 0; c < n; ++c) v[c] -= d * q(p, c);
        }
        const double nrm = norm2(v);
        for (std::size_t c = 0; c < n; ++c) q(r, c) = v[c] / nrm;
    }
    return q;
}

// alpha is the orthant probability of a random sample vertex, preferring
// those in [alpha_lo, alpha_hi]; the band around it is never empty.
Instance make_instance(std::uint64_t seed, std::size_t index, std::size_t m, double alpha_lo,
                       double alpha_hi) {
    std::mt19937_64 rng(seed);
    const std::size_t n = 2 + index % 2;
    Sample s = random_gaussian(n, m, rng);
    Direction u = random_direction(n, rng);
    const auto counts = OrthantCounter(s, rotation_frame(u)).batch_counts(1);
    std::vector<double> inside;
    double nearest = 0.0;
    double nearest_d = std::numeric_limits<double>::infinity();
    for (auto c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(m);
        if (p >= alpha_lo && p <= alpha_hi) inside.push_back(p);
        const double d = std::max(alpha_lo - p, p - alpha_hi);
        if (d < nearest_d) {
            nearest_d = d;
            nearest = p;
        }
    }
    double alpha = nearest;
    if (!inside.empty())
        alpha = inside[std::uniform_int_distribution<std::size_t>(0, inside.size() - 1)(rng)];
    return {seed, n, std::move(s), std::move(u), alpha};
}

std::string tag(const Instance& in, std::size_t k) {
    return "instance " + std::to_string(k) + " (n=" + std::to_string(in.n) +
           ", seed=" + std::to_string(in.seed) + ")";
}

EstimatorConfig single_threaded(double alpha) {
    EstimatorConfig cfg;
    cfg.alpha = alpha;
    cfg.threads = 1;
    return cfg;
}

using CheckFn = std::function<SuiteCheck(std::size_t k, std::uint64_t seed)>;

std::vector<SuiteCheck> run_checks(std::size_t count, const SuiteOptions& opts, const CheckFn& fn) {
    std::vector<SuiteCheck> out(count);
    const std::size_t threads = opts.threads == 0 ? default_thread_count() : opts.threads;
    parallel_for(count, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const std::uint64_t seed = split_seed(opts.seed, k);
            try {
                out[k] = fn(k, seed);
            } catch (const Error& err) {
                out[k] = {"instance " + std::to_string(k), false,
                          std::string("error: ") + err.what()};
            }
        }
    });
    return out;
}

constexpr std::size_t kBandSize = 300;

SuiteCheck check_p1(std::size_t k, std::uint64_t seed) {
    const Instance in = make_instance(seed, k, 2000, 0.02, 0.2);
    const RotationFrame frame = rotation_frame(in.u);
    const VaREstimate v = var_ray(in.sample, frame, single_threaded(in.alpha));
    if (!(*v.lambda > 0.0)) return {tag(in, k), true, fmt("vacuous: lambda=%.6g", *v.lambda)};
    const DirOrder o = dir_compare(in.sample.mean(), v.point, frame);
    return {tag(in, k), o == DirOrder::less_equal,
            fmt("lambda=%.6g", *v.lambda) + ", mean vs point: " + to_string(o)};
}

SuiteCheck check_p2(std::size_t k, std::uint64_t seed) {
    const Instance in = make_instance(seed, k, kBandSize, 0.05, 0.5);
    const RotationFrame frame = rotation_frame(in.u);
    const RotationFrame opposite = opposite_frame(frame);
    const EstimatorConfig cfg = single_threaded(in.alpha);
    const Sample neg = in.sample.negated();

    const auto band_neg = var_band(neg, frame, cfg);
    const auto band = var_band(in.sample, opposite, cfg);
    bool band_ok = band_neg.point.size() == band.point.size();
    for (std::size_t i = 0; band_ok && i < band.point.size(); ++i)
        band_ok = band_neg.point[i] == -band.point[i];

    const auto ray_neg = var_ray(neg, frame, cfg);
    const auto ray = var_ray(in.sample, opposite, cfg);
    std::vector<double> flipped(ray.point);
    for (double& x : flipped) x = -x;
    const double ray_diff = max_abs(ray_neg.point, flipped);
    const bool ray_ok = ray_diff <= cfg.ray_tol * in.sample.scale();
    return {tag(in, k), band_ok && ray_ok,
            std::string("band exact: ") + (band_ok ? "yes" : "no") +
                fmt(", ray max diff %.3g", ray_diff)};
}

SuiteCheck check_p3(std::size_t k, std::uint64_t seed) {
    const Instance in = make_instance(seed, k, kBandSize, 0.05, 0.5);
    std::mt19937_64 rng(split_seed(seed, 3));
    const double c = std::uniform_real_distribution<double>(0.25, 4.0)(rng);
    std::vector<double> b(in.n);
    for (double& x : b) x = std::normal_distribution<double>(0.0, 10.0)(rng);
    const RotationFrame frame = rotation_frame(in.u);
    const EstimatorConfig cfg = single_threaded(in.alpha);
    const Sample moved = in.sample.affine(c, b);

    const auto band = var_band(in.sample, frame, cfg);
    const auto band_moved = var_band(moved, frame, cfg);
    const auto expect = moved.row(*band.sample_index);
    const bool band_ok = band_moved.sample_index == band.sample_index &&
                         std::equal(expect.begin(), expect.end(), band_moved.point.begin());

    const auto ray = var_ray(in.sample, frame, cfg);
    const auto ray_moved = var_ray(moved, frame, cfg);
    std::vector<double> mapped(ray.point);
    for (std::size_t i = 0; i < in.n; ++i) mapped[i] = c * mapped[i] + b[i];
    const double ray_diff = max_abs(ray_moved.point, mapped);
    const bool ray_ok = ray_diff <= c * cfg.ray_tol;
    return {tag(in, k), band_ok && ray_ok,
            fmt("c=%.4g, ", c) + "band exact: " + (band_ok ? "yes" : "no") +
                fmt(", ray max diff %.3g (allowed %.3g)", ray_diff, c * cfg.ray_tol)};
}

SuiteCheck check_p4(std::size_t k, std::uint64_t seed) {
    const Instance in = make_instance(seed, k, 2000, 0.05, 0.5);
    std::mt19937_64 rng(split_seed(seed, 4));
    const double c = std::uniform_real_distribution<double>(0.1, 2.0)(rng) * in.sample.scale();
    std::vector<double> shift(in.n);
    for (std::size_t i = 0; i < in.n; ++i) shift[i] = c * in.u[i];
    const RotationFrame frame = rotation_frame(in.u);
    const EstimatorConfig cfg = single_threaded(in.alpha);
    const auto vx = var_ray(in.sample, frame, cfg);
    const auto vy = var_ray(in.sample.affine(1.0, shift), frame, cfg);
    const DirOrder o = dir_compare(vx.point, vy.point, frame);
    return {tag(in, k), o == DirOrder::less_equal,
            fmt("c=%.4g, ", c) + "VaR(X) vs VaR(X + c u): " + to_string(o)};
}

SuiteCheck check_p5(std::size_t k, std::uint64_t seed) {
    const Instance in = make_instance(seed, k, kBandSize, 0.05, 0.5);
    std::mt19937_64 rng(split_seed(seed, 5));
    const Matrix q = random_orthogonal(in.n, rng);
    const RotationFrame frame = rotation_frame(in.u);
    const RotationFrame paired = rotated_frame(frame, q);
    const EstimatorConfig cfg = single_threaded(in.alpha);
    const Sample rotated = in.sample.transformed(q);

    const auto band = var_band(in.sample, frame, cfg);
    const auto band_q = var_band(rotated, paired, cfg);
    const auto expect = q.apply(band.point);
    const bool pair_ok = band_q.sample_index == band.sample_index && band_q.point == expect;
    std::string detail = std::string("frame pair exact: ") + (pair_ok ? "yes" : "no");
    bool ok = pair_ok;
    if (in.n == 2) {
        // In the plane the orthant depends on u alone.
        const auto band_c = var_band(rotated, rotation_frame(paired.direction()), cfg);
        const bool canon_ok = band_c.sample_index == band.sample_index;
        detail += std::string(", canonical frame: ") + (canon_ok ? "yes" : "no");
        ok = ok && canon_ok;
    }
    return {tag(in, k), ok, detail};
}

SuiteCheck check_p6(std::size_t k, std::uint64_t seed) {
    const Instance in = make_instance(seed, k, kBandSize, 0.05, 0.5);
    const RotationFrame frame = rotation_frame(in.u);
    const EstimatorConfig cfg = single_threaded(in.alpha);
    std::vector<double> sup(in.n, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < in.sample.size(); ++i) {
        const auto y = frame.apply(in.sample.row(i));
        for (std::size_t j = 0; j < in.n; ++j) sup[j] = std::max(sup[j], y[j]);
    }
    auto below = [&](const VaREstimate& v) {
        const auto y = frame.apply(v.point);
        for (std::size_t j = 0; j < in.n; ++j)
            if (!(y[j] <= sup[j])) return false;
        return true;
    };
    const bool band_ok = below(var_band(in.sample, frame, cfg));
    const bool ray_ok = below(var_ray(in.sample, frame, cfg));
    return {tag(in, k), band_ok && ray_ok,
            std::string("band: ") + (band_ok ? "yes" : "no") + ", ray: " + (ray_ok ? "yes" : "no")};
}

// (X, Y) from one 4-variate Student-t(3) with common mean (1,1) for both
// pairs, within-pair correlation 0.5 and cross correlation 0.3.
SuiteCheck check_p7(std::size_t k, std::uint64_t seed) {
    constexpr std::size_t m = 20000;
    constexpr double alpha = 0.01;
    const std::vector<double> mu{1.0, 1.0, 1.0, 1.0};
    const Matrix sigma{4,
                       4,
                       {1.0, 0.5, 0.3, 0.0,  //
                        0.5, 1.0, 0.0, 0.3,  //
                        0.3, 0.0, 1.0, 0.5,  //
                        0.0, 0.3, 0.5, 1.0}};
    const Sample joint = sample_mvt(mu, sigma, 3.0, m, seed);
    std::vector<double> x(2 * m), y(2 * m), s(2 * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            x[2 * i + j] = joint(i, j);
            y[2 * i + j] = joint(i, j + 2);
            s[2 * i + j] = x[2 * i + j] + y[2 * i + j];
        }
    const RotationFrame frame = rotation_frame(Direction::normalized({1.0, 1.0}));
    const EstimatorConfig cfg = single_threaded(alpha);
    const auto vx = var_ray(Sample(m, 2, std::move(x)), frame, cfg);
    const auto vy = var_ray(Sample(m, 2, std::move(y)), frame, cfg);
    const auto vs = var_ray(Sample(m, 2, std::move(s)), frame, cfg);
    const std::vector<double> sum{vx.point[0] + vy.point[0], vx.point[1] + vy.point[1]};
    const DirOrder o = dir_compare(vs.point, sum, frame);
    const bool ok = o == DirOrder::less_equal || o == DirOrder::equal;
    return {"replication " + std::to_string(k) + " (seed=" + std::to_string(seed) + ")", ok,
            fmt("VaR(X+Y)=(%.4g, %.4g)", vs.point[0], vs.point[1]) +
                fmt(" vs VaR(X)+VaR(Y)=(%.4g, %.4g): ", sum[0], sum[1]) + to_string(o)};
}

// Gaussian pairs with unequal scales over a correlation x level grid.
SuiteCheck check_marginal(std::size_t k, std::uint64_t seed) {
    static const double rhos[] = {-0.5, 0.0, 0.5, 0.8};
    static const double alphas[] = {0.05, 0.1, 0.3};
    const double rho = rhos[k % 4];
    const double alpha = alphas[(k / 4) % 3];
    const Matrix sigma{2, 2, {1.0, 2.0 * rho, 2.0 * rho, 4.0}};
    const Sample s = sample_mvnormal(std::vector<double>{1.0, -2.0}, sigma, 50000, seed);
    // The inequalities hold exactly for the empirical measure when the ray
    // hits the level; a tolerance under one observation keeps the miss
    // within the order-statistic gap.
    EstimatorConfig up_cfg = single_threaded(alpha);
    up_cfg.ray_tol = 0.5 / static_cast<double>(s.size());
    EstimatorConfig low_cfg = up_cfg;
    low_cfg.alpha = 1.0 - alpha;
    const auto up = var_ray(s, Direction::diagonal(2), up_cfg);
    const auto low = var_ray(s, Direction::diagonal(2, -1.0), low_cfg);
    bool ok = true;
    std::string detail = fmt("rho=%.2g, alpha=%.2g", rho, alpha);
    for (std::size_t i = 0; i < 2; ++i) {
        const auto col = s.column(i);
        const double q = univariate_var(col, 1.0 - alpha);
        const double eps = order_statistic_gap(col, 1.0 - alpha);
        const bool a = q >= up.point[i] - eps;
        const bool b = low.point[i] >= q - eps;
        ok = ok && a && b;
        detail += fmt("; x%.0f: upper %.5g <= q %.5g", static_cast<double>(i + 1), up.point[i], q) +
                  fmt(" <= lower %.5g", low.point[i]);
    }
    return {"case " + std::to_string(k), ok, detail};
}

// Gaussian and uniform samples, u in {e, (1,2)/sqrt 5}, three levels.
SuiteCheck check_eq15(std::size_t k, std::uint64_t seed) {
    static const double alphas[] = {0.1, 0.3, 0.5};
    const bool gaussian = k % 2 == 0;
    const bool diagonal = (k / 2) % 2 == 0;
    const double alpha = alphas[(k / 4) % 3];
    const Sample s = gaussian ? sample_mvnormal(std::vector<double>{0.0, 0.0},
                                                Matrix{2, 2, {1.0, 0.5, 0.5, 1.0}}, 5000, seed)
                              : sample_uniform(2, 5000, seed);
    const Direction u =
        diagonal ? Direction::diagonal(2) : Direction::normalized({1.0, 2.0});
    const RotationFrame frame = rotation_frame(u);
    const EstimatorConfig cfg = single_threaded(alpha);
    const UpperLower ul = upper_lower_var(s, frame, cfg);
    // Both points lie on the line through the mean; lower's parameter runs
    // along -u.
    const double lu = *ul.upper.lambda;
    const double ll = -*ul.lower.lambda;
    bool ok = lu <= ll;
    std::string detail = std::string(gaussian ? "gaussian" : "uniform") +
                         (diagonal ? ", u=e" : ", u=(1,2)/sqrt5") +
                         fmt(", alpha=%.2g: lambda upper %.5g, lower %.5g", alpha, lu, ll);
    if (!ok) {
        const double p = empirical_orthant_prob(s, frame, ul.lower.point);
        ok = std::abs(p - alpha) <= cfg.ray_tol;
        detail += fmt(", orthant prob at lower %.6g", p);
    }
    return {"case " + std::to_string(k), ok, detail};
}

SuiteCheck check_bound(std::size_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = 2 + k % 2;
    const Sample s = random_gaussian(n, 2000, rng);
    std::vector<double> w(n);
    std::normal_distribution<double> z;
    for (double& x : w) x = z(rng);
    const double alpha = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
    const PortfolioBound pb = portfolio_bound(s, w, alpha, single_threaded(alpha));
    return {"instance " + std::to_string(k) + " (n=" + std::to_string(n) +
                ", seed=" + std::to_string(seed) + ")",
            pb.bound >= pb.var_z - pb.gap,
            fmt("alpha=%.3g, bound %.6g, var_z %.6g", alpha, pb.bound, pb.var_z) +
                fmt(", gap %.3g", pb.gap)};
}

}  // namespace

SuiteReport run_suite(std::string_view name, const SuiteOptions& opts) {
    struct Entry {
        const char* name;
        std::size_t count;
        double rate;
        SuiteCheck (*fn)(std::size_t, std::uint64_t);
    };
    static const Entry table[] = {
        {"P1", 20, 1.0, check_p1},         {"P2", 20, 1.0, check_p2},
        {"P3", 20, 1.0, check_p3},         {"P4", 20, 1.0, check_p4},
        {"P5", 20, 1.0, check_p5},         {"P6", 20, 1.0, check_p6},
        {"P7", 50, 0.95, check_p7},        {"marginal", 12, 1.0, check_marginal},
        {"eq15", 12, 1.0, check_eq15},     {"bound", 100, 1.0, check_bound},
    };
    for (const Entry& e : table) {
        if (name != e.name) continue;
        SuiteReport r;
        r.suite = e.name;
        r.seed = opts.seed;
        r.required_rate = e.rate;
        r.checks = run_checks(opts.instances ? opts.instances : e.count, opts, e.fn);
        return r;
    }
    throw DomainError("unknown suite '" + std::string(name) + "'");
}

}  // namespace dvar
