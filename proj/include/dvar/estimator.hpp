#pragma once

// Sample-based directional VaR.
//
// Two estimators are provided. var_band is the slack-band search: collect the
// sample points whose own orthant probability is within h of alpha, then
// return the one closest to the line through the sample mean in direction u.
// var_ray bisects the orthant probability along that line directly; the
// probability is non-increasing in the ray parameter because moving the
// vertex along +u shrinks the orthant.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dvar/geometry.hpp"
#include "dvar/sample.hpp"

namespace dvar {

struct EstimatorConfig {
    double alpha = 0.1;
    /// Band half-width; unset means default_slack(m).
    std::optional<double> slack_h;
    /// Bisection stops once |P - alpha| <= ray_tol.
    double ray_tol = 1e-4;
    /// Initial search radius, in units of Sample::scale().
    double lambda_bracket = 1.0;
    /// Orthant membership tolerance (0 = closed orthant, exact comparisons).
    double tol_geom = 0.0;
    /// Threads for batch orthant counting; 0 means default_thread_count().
    std::size_t threads = 0;
};

/// max(0.5 / sqrt(m), 0.005)
double default_slack(std::size_t m);

/// Throws DomainError for alpha outside (0,1), slack outside [0,1],
/// non-positive ray_tol or lambda_bracket, or negative tol_geom.
void validate(const EstimatorConfig& cfg);

enum class Method { band, ray };
const char* to_string(Method m);

struct VaREstimate {
    std::vector<double> point;
    /// point = mean + lambda * u for the ray method.
    std::optional<double> lambda;
    double achieved_prob = 0.0;
    Method method = Method::ray;
    std::vector<double> direction;
    double alpha = 0.0;
    /// Row of the sample returned by the band method.
    std::optional<std::size_t> sample_index;
};

/// The sample rotated once into frame coordinates, y_i = R x_i. Orthant
/// queries become componentwise comparisons against R * vertex.
class OrthantCounter {
public:
    OrthantCounter(const Sample& sample, const RotationFrame& frame, double tol_geom = 0.0);

    std::size_t size() const { return m_; }
    const RotationFrame& frame() const { return frame_; }

    /// Number of observations in the orthant with this vertex. O(m n).
    std::size_t count(std::span<const double> vertex) const;
    double prob(std::span<const double> vertex) const {
        return static_cast<double>(count(vertex)) / static_cast<double>(m_);
    }

    /// Orthant counts with each sample point as vertex. Uses an
    /// O(m log m) sweep when n == 2 and tol_geom == 0, else the O(m^2 n)
    /// pairwise count split across threads.
    std::vector<std::size_t> batch_counts(std::size_t threads = 0) const;
    std::vector<std::size_t> batch_counts_naive(std::size_t threads = 0) const;

private:
    std::vector<std::size_t> batch_counts_sweep2() const;

    RotationFrame frame_;
    std::size_t m_;
    std::size_t n_;
    double tol_;
    std::vector<double> rotated_;
};

/// Fraction of observations z with R (z - vertex) >= 0.
double empirical_orthant_prob(const Sample& sample, const RotationFrame& frame,
                              std::span<const double> vertex, double tol_geom = 0.0);

/// Euclidean distance from x to the line {mean + lambda u}.
double distance_to_line(std::span<const double> x, std::span<const double> mean,
                        std::span<const double> u);

VaREstimate var_band(const Sample& sample, const RotationFrame& frame, const EstimatorConfig& cfg);
VaREstimate var_band(const Sample& sample, const Direction& u, const EstimatorConfig& cfg);

VaREstimate var_ray(const Sample& sample, const RotationFrame& frame, const EstimatorConfig& cfg);
VaREstimate var_ray(const Sample& sample, const Direction& u, const EstimatorConfig& cfg);

VaREstimate estimate(const Sample& sample, const RotationFrame& frame, const EstimatorConfig& cfg,
                     Method method);

/// Empirical p-quantile: the smallest order statistic x_(k) with k/m >= p.
double univariate_var(std::span<const double> values, double p);

/// Largest gap between the order statistic returned by univariate_var and its
/// neighbours; the slack allowed for sampling noise in inequality checks.
double order_statistic_gap(std::span<const double> values, double p);

struct UpperLower {
    VaREstimate upper;
    VaREstimate lower;
};

/// upper = var_ray(u, alpha); lower = var_ray(-u, 1 - alpha) in the frame -R_u.
UpperLower upper_lower_var(const Sample& sample, const RotationFrame& frame,
                           const EstimatorConfig& cfg);
UpperLower upper_lower_var(const Sample& sample, const Direction& u, const EstimatorConfig& cfg);

enum class Side { upper, lower };

/// Benchmark measure: mean of the sample points whose empirical distribution
/// function (lower) or survival function (upper) is within slack_h of alpha.
std::vector<double> bernardino_empirical(const Sample& sample, double alpha, double slack_h,
                                         Side side, std::size_t threads = 0);

struct PortfolioBound {
    double bound = 0.0;
    double var_z = 0.0;
    VaREstimate estimate;
    /// Order-statistic gap of w'X at the tested level.
    double gap = 0.0;
};

/// bound = w' var_ray(sample, -w/|w|, alpha).point and var_z = empirical
/// alpha-quantile of Z = w'X; the bound satisfies bound >= var_z up to one
/// order-statistic gap.
PortfolioBound portfolio_bound(const Sample& sample, std::span<const double> w, double alpha,
                               EstimatorConfig cfg);

}  // namespace dvar
