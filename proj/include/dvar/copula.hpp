#pragma once

// Copula models with closed-form or quadrature directional VaR.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "dvar/sample.hpp"

namespace dvar {

enum class CopulaFamily { clayton, frank, independence };

const char* to_string(CopulaFamily f);
CopulaFamily parse_family(std::string_view s);

/// Archimedean copula C(v) = phi^{-1}(sum phi(v_i)).
class ArchimedeanModel {
public:
    /// Clayton requires beta in [-1,0) or (0,inf); Frank requires beta != 0.
    /// beta is ignored for the independence family.
    ArchimedeanModel(CopulaFamily family, double beta);

    static ArchimedeanModel independence() { return {CopulaFamily::independence, 0.0}; }
    static ArchimedeanModel clayton(double beta) { return {CopulaFamily::clayton, beta}; }
    static ArchimedeanModel frank(double beta) { return {CopulaFamily::frank, beta}; }

    CopulaFamily family() const { return family_; }
    double beta() const { return beta_; }

    /// Generator on (0,1]; phi(1) = 0.
    double phi(double t) const;
    /// (Pseudo-)inverse on [0,inf].
    double phi_inv(double s) const;
    /// C(v_1, ..., v_n).
    double cdf(std::span<const double> v) const;

private:
    CopulaFamily family_;
    double beta_;
};

/// Common component v of the lower directional VaR (direction -e) at
/// orthant level 1 - alpha: phi^{-1}(phi(1-alpha)/n), so C(v,...,v) = 1-alpha.
double archimedean_var_lower(const ArchimedeanModel& model, int n, double alpha);

/// Common component of the upper directional VaR (direction e) when the model
/// is the survival copula: 1 - phi^{-1}(phi(alpha)/n).
double archimedean_var_upper(const ArchimedeanModel& model, int n, double alpha);

enum class ClaytonColumn { directional_X, directional_1mX, bernardino_X, bernardino_1mX };

const char* to_string(ClaytonColumn c);
ClaytonColumn parse_clayton_column(std::string_view s);

/// Clayton comparison table. The directional columns use the generator form
/// for any n: directional_X(alpha) is the v with C(v,...,v) = alpha and
/// directional_1mX(alpha) = 1 - directional_X(1 - alpha). The benchmark
/// columns are the level-curve means of the bivariate Clayton copula and
/// exist for n == 2, beta != 1 only.
double clayton_table(double beta, double alpha, int n, ClaytonColumn which);

/// The printed n-variate directional Clayton expression
/// ((1 + alpha^-beta)/n)^(-1/beta). It agrees with the generator form only
/// for n == 2.
double clayton_directional_printed(double beta, double alpha, int n);

/// Frank copula density (the nonnegative form).
double frank_density(double beta, double v1, double v2);

using Density2 = std::function<double(double, double)>;

Density2 independence_density();
Density2 frank_density_fn(double beta);

enum class QuadratureScheme {
    /// Clip the square to the oriented quadrant (a convex polygon) and
    /// integrate the density exactly on its triangles.
    polygon,
    /// Indicator-masked tensor Gauss-Legendre rule over the whole square.
    masked_tensor,
};

struct BivariateDirectionalProblem {
    Density2 density;
    /// u = (cos theta, sin theta).
    double theta = 0.0;
    double alpha = 0.1;
    /// Bisection stops once |P - alpha| <= tol.
    double tol = 1e-4;
    QuadratureScheme scheme = QuadratureScheme::polygon;
    /// Nodes per axis for the masked tensor rule.
    std::size_t tensor_nodes = 200;
    /// Nodes per axis on each triangle for the polygon rule.
    std::size_t panel_nodes = 32;
};

struct BivariateResult {
    double point[2];
    double lambda;
    double achieved_prob;
};

/// Probability of the oriented quadrant with this vertex under the density.
double bivariate_orthant_prob(const BivariateDirectionalProblem& problem, double x1, double x2);

/// Integral of the density over the unit square (with the problem's scheme).
double bivariate_total_mass(const BivariateDirectionalProblem& problem);

/// Point (1/2,1/2) + lambda u whose oriented quadrant carries probability
/// alpha. Throws DomainError when the density does not integrate to 1 within
/// 1e-6, NoSolution when alpha is outside the attainable range.
BivariateResult bivariate_directional_var(const BivariateDirectionalProblem& problem);

/// Marshall-Olkin frailty sampler, beta > 0.
Sample sample_clayton(double beta, int n, std::size_t m, std::uint64_t seed);

/// Bivariate Frank sampler by conditional inversion.
Sample sample_frank(double beta, std::size_t m, std::uint64_t seed);

/// Independent uniform marginals.
Sample sample_uniform(int n, std::size_t m, std::uint64_t seed);

}  // namespace dvar
