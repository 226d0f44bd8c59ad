#pragma once

// Synthetic data, the two-component contamination model and the robustness
// harness comparing the directional VaR with the level-curve benchmark.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dvar/linalg.hpp"
#include "dvar/sample.hpp"

namespace dvar {

/// Multivariate normal draw x = mu + L z with L L^T = sigma.
Sample sample_mvnormal(std::span<const double> mu, const Matrix& sigma, std::size_t m,
                       std::uint64_t seed);

/// Multivariate Student-t: x = mu + L z / sqrt(chi2_nu / nu).
Sample sample_mvt(std::span<const double> mu, const Matrix& sigma, double nu, std::size_t m,
                  std::uint64_t seed);

/// With probability 1 - omega an observation comes from N(mu1, sigma1),
/// otherwise from N(mu1 + delta_mu, sigma1 + delta_sigma).
struct ContaminationScenario {
    std::string name;
    std::vector<double> mu1{50.0, 50.0};
    Matrix sigma1{2, 2, {0.5, 0.3, 0.3, 0.5}};
    std::vector<double> delta_mu{0.0, 0.0};
    Matrix delta_sigma{2, 2, {0.0, 0.0, 0.0, 0.0}};
    double omega = 0.0;

    std::vector<double> mu2() const;
    /// sigma1 + delta_sigma, symmetrised.
    Matrix sigma2() const;
    /// Throws DomainError on a bad omega or non-PD covariance.
    void validate() const;
};

/// Named scenarios: variance, covariance, mean-x1 ([25,0]), mean-x2 ([0,25]),
/// mean-both ([25,25]), joint (covariance increment plus a mean shift,
/// [25,25] unless overridden).
ContaminationScenario named_scenario(const std::string& name);
std::vector<std::string> scenario_names();

/// Each row draws its own mixing coin. Normal draws are shared between the
/// components (row i uses the same z_i either way), so omega = 0 reproduces
/// sample_mvnormal(mu1, sigma1, m, seed) bit for bit.
Sample sample_contaminated(const ContaminationScenario& s, std::size_t m, std::uint64_t seed);

/// |contaminated - clean|_2 / |clean|_2.
double pv_metric(std::span<const double> contaminated, std::span<const double> clean);

struct RobustnessOptions {
    std::vector<double> omegas{0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10};
    std::size_t m = 5000;
    std::size_t replications = 100;
    double alpha = 0.1;
    std::uint64_t seed = 1;
    /// Benchmark band; unset means default_slack(m).
    double slack_h = -1.0;
    /// 0 means default_thread_count().
    std::size_t threads = 0;
};

struct RobustnessReport {
    std::string scenario_name;
    std::vector<double> omegas;
    std::vector<double> pv_directional;
    std::vector<double> pv_benchmark;
    /// Standard errors of the replication means.
    std::vector<double> se_directional;
    std::vector<double> se_benchmark;
    std::size_t replications = 0;
    std::size_t m = 0;
    double alpha = 0.0;
    double slack_h = 0.0;
    std::uint64_t seed = 0;
};

/// For every replication r (seed split_seed(seed, r)) draws a clean sample
/// and, for each omega, a contaminated one with the same seed; averages PV
/// of var_ray(e, alpha) and of the upper benchmark over replications.
RobustnessReport run_robustness(const ContaminationScenario& scenario,
                                const RobustnessOptions& opts);

}  // namespace dvar
