#include "dvar/simulate.hpp"

#include <cmath>
#include <random>

#include "dvar/errors.hpp"
#include "dvar/estimator.hpp"
#include "dvar/geometry.hpp"
#include "dvar/parallel.hpp"

namespace dvar {

namespace {

void check_mu(std::span<const double> mu, const Matrix& sigma) {
    if (mu.empty()) throw DomainError("mean vector must be nonempty");
    if (sigma.rows() != mu.size() || sigma.cols() != mu.size())
        throw DimensionMismatch(mu.size(), sigma.rows());
}

// x = mu + L z, written into out.
void affine_normal(std::span<const double> mu, const Matrix& l, std::span<const double> z,
                   double* out) {
    const std::size_t n = mu.size();
    for (std::size_t r = 0; r < n; ++r) {
        double s = mu[r];
        for (std::size_t c = 0; c <= r; ++c) s += l(r, c) * z[c];
        out[r] = s;
    }
}

constexpr std::uint64_t kMixingStream = 0xC0;

}  // namespace

Sample sample_mvnormal(std::span<const double> mu, const Matrix& sigma, std::size_t m,
                       std::uint64_t seed) {
    check_mu(mu, sigma);
    if (m == 0) throw DomainError("sample size must be >= 1");
    const Matrix l = cholesky(sigma);
    const std::size_t n = mu.size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<double> z(n);
    std::vector<double> data(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        for (double& v : z) v = gauss(rng);
        affine_normal(mu, l, z, data.data() + i * n);
    }
    return Sample(m, n, std::move(data));
}

Sample sample_mvt(std::span<const double> mu, const Matrix& sigma, double nu, std::size_t m,
                  std::uint64_t seed) {
    check_mu(mu, sigma);
    if (!(nu > 0.0)) throw DomainError("degrees of freedom must be positive");
    if (m == 0) throw DomainError("sample size must be >= 1");
    const Matrix l = cholesky(sigma);
    const std::size_t n = mu.size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::chi_squared_distribution<double> chi2(nu);
    std::vector<double> z(n);
    std::vector<double> data(m * n);
    const std::vector<double> zero(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (double& v : z) v = gauss(rng);
        const double scale = 1.0 / std::sqrt(chi2(rng) / nu);
        for (double& v : z) v *= scale;
        affine_normal(mu, l, z, data.data() + i * n);
    }
    return Sample(m, n, std::move(data));
}

std::vector<double> ContaminationScenario::mu2() const {
    std::vector<double> out(mu1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += delta_mu[i];
    return out;
}

Matrix ContaminationScenario::sigma2() const {
    const std::size_t n = sigma1.rows();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double a = sigma1(i, j) + delta_sigma(i, j);
            const double b = sigma1(j, i) + delta_sigma(j, i);
            out(i, j) = 0.5 * (a + b);
        }
    return out;
}

void ContaminationScenario::validate() const {
    if (!(omega >= 0.0 && omega <= 1.0)) throw DomainError("omega must lie in [0,1]");
    const std::size_t n = mu1.size();
    if (delta_mu.size() != n) throw DimensionMismatch(n, delta_mu.size());
    if (sigma1.rows() != n || delta_sigma.rows() != n) throw DimensionMismatch(n, sigma1.rows());
    cholesky(sigma1);
    cholesky(sigma2());
}

ContaminationScenario named_scenario(const std::string& name) {
    ContaminationScenario s;
    s.name = name;
    const Matrix variance{2, 2, {4.5, 0.0, 0.0, 6.5}};
    // The printed covariance increment is asymmetric (0.2 / 0.3); its
    // symmetric part is used.
    const Matrix covariance{2, 2, {4.5, 0.25, 0.25, 6.5}};
    if (name == "variance") {
        s.delta_sigma = variance;
    } else if (name == "covariance") {
        s.delta_sigma = covariance;
    } else if (name == "mean-x1") {
        s.delta_mu = {25.0, 0.0};
    } else if (name == "mean-x2") {
        s.delta_mu = {0.0, 25.0};
    } else if (name == "mean-both") {
        s.delta_mu = {25.0, 25.0};
    } else if (name == "joint") {
        s.delta_mu = {25.0, 25.0};
        s.delta_sigma = covariance;
    } else {
        throw DomainError("unknown scenario '" + name + "'");
    }
    return s;
}

std::vector<std::string> scenario_names() {
    return {"variance", "covariance", "mean-x1", "mean-x2", "mean-both", "joint"};
}

Sample sample_contaminated(const ContaminationScenario& s, std::size_t m, std::uint64_t seed) {
    s.validate();
    if (m == 0) throw DomainError("sample size must be >= 1");
    const std::size_t n = s.mu1.size();
    const Matrix l1 = cholesky(s.sigma1);
    const Matrix l2 = cholesky(s.sigma2());
    const auto mu2 = s.mu2();

    std::mt19937_64 rng(seed);
    std::mt19937_64 coin_rng(split_seed(seed, kMixingStream));
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<double> z(n);
    std::vector<double> data(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        for (double& v : z) v = gauss(rng);
        const bool outlier = coin(coin_rng) < s.omega;
        if (outlier)
            affine_normal(mu2, l2, z, data.data() + i * n);
        else
            affine_normal(s.mu1, l1, z, data.data() + i * n);
    }
    return Sample(m, n, std::move(data));
}

double pv_metric(std::span<const double> contaminated, std::span<const double> clean) {
    if (contaminated.size() != clean.size())
        throw DimensionMismatch(clean.size(), contaminated.size());
    const double den = norm2(clean);
    if (den == 0.0) throw DomainError("PV is undefined for a zero reference measure");
    double ss = 0.0;
    for (std::size_t i = 0; i < clean.size(); ++i) {
        const double d = contaminated[i] - clean[i];
        ss += d * d;
    }
    return std::sqrt(ss) / den;
}

RobustnessReport run_robustness(const ContaminationScenario& scenario,
                                const RobustnessOptions& opts) {
    scenario.validate();
    if (opts.replications == 0) throw DomainError("replications must be >= 1");
    if (opts.omegas.empty()) throw DomainError("omega list is empty");
    for (double w : opts.omegas)
        if (!(w >= 0.0 && w <= 1.0)) throw DomainError("omega must lie in [0,1]");

    const std::size_t n = scenario.mu1.size();
    const double h = opts.slack_h >= 0.0 ? opts.slack_h : default_slack(opts.m);
    EstimatorConfig cfg;
    cfg.alpha = opts.alpha;
    cfg.threads = 1;
    validate(cfg);
    const RotationFrame frame = rotation_frame(Direction::diagonal(n));

    const std::size_t k = opts.omegas.size();
    const std::size_t reps = opts.replications;
    // pv[r * k + j]
    std::vector<double> pv_dir(reps * k);
    std::vector<double> pv_ben(reps * k);

    const std::size_t threads = opts.threads == 0 ? default_thread_count() : opts.threads;
    parallel_for(reps, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r) {
            const std::uint64_t seed = split_seed(opts.seed, r);
            const Sample clean = sample_mvnormal(scenario.mu1, scenario.sigma1, opts.m, seed);
            const auto dir0 = var_ray(clean, frame, cfg).point;
            const auto ben0 = bernardino_empirical(clean, opts.alpha, h, Side::upper, 1);
            for (std::size_t j = 0; j < k; ++j) {
                ContaminationScenario s = scenario;
                s.omega = opts.omegas[j];
                const Sample dirty = sample_contaminated(s, opts.m, seed);
                pv_dir[r * k + j] = pv_metric(var_ray(dirty, frame, cfg).point, dir0);
                pv_ben[r * k + j] =
                    pv_metric(bernardino_empirical(dirty, opts.alpha, h, Side::upper, 1), ben0);
            }
        }
    });

    RobustnessReport rep;
    rep.scenario_name = scenario.name;
    rep.omegas = opts.omegas;
    rep.replications = reps;
    rep.m = opts.m;
    rep.alpha = opts.alpha;
    rep.slack_h = h;
    rep.seed = opts.seed;
    auto summarize = [&](const std::vector<double>& pv, std::vector<double>& mean,
                         std::vector<double>& se) {
        mean.assign(k, 0.0);
        se.assign(k, 0.0);
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < reps; ++r) s += pv[r * k + j];
            const double mu = s / static_cast<double>(reps);
            double ss = 0.0;
            for (std::size_t r = 0; r < reps; ++r) ss += (pv[r * k + j] - mu) * (pv[r * k + j] - mu);
            mean[j] = mu;
            se[j] = reps > 1 ? std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps))
                             : 0.0;
        }
    };
    summarize(pv_dir, rep.pv_directional, rep.se_directional);
    summarize(pv_ben, rep.pv_benchmark, rep.se_benchmark);
    return rep;
}

}  // namespace dvar
