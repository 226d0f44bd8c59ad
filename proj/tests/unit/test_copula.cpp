#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dvar/copula.hpp"
#include "dvar/errors.hpp"
#include "dvar/quadrature.hpp"

using namespace dvar;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form bivariate Frank copula, written out independently of the model.
double frank_cdf(double b, double u, double v) {
    return -std::log(1.0 + (std::exp(-b * u) - 1.0) * (std::exp(-b * v) - 1.0) /
                               (std::exp(-b) - 1.0)) /
           b;
}

double clayton_cdf(double b, double u, double v) {
    return std::pow(std::pow(u, -b) + std::pow(v, -b) - 1.0, -1.0 / b);
}

double kendall_tau(const Sample& s) {
    const std::size_t m = s.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const double a = (s(i, 0) - s(j, 0)) * (s(i, 1) - s(j, 1));
            acc += a > 0 ? 1.0 : (a < 0 ? -1.0 : 0.0);
        }
    return 2.0 * acc / (static_cast<double>(m) * static_cast<double>(m - 1));
}

double ks_uniform(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    const double m = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double k = static_cast<double>(i);
        d = std::max({d, (k + 1.0) / m - x[i], x[i] - k / m});
    }
    return d;
}

std::vector<ArchimedeanModel> models() {
    return {ArchimedeanModel::independence(), ArchimedeanModel::clayton(0.5),
            ArchimedeanModel::clayton(2.0),   ArchimedeanModel::clayton(-0.5),
            ArchimedeanModel::frank(-5.0),    ArchimedeanModel::frank(3.0)};
}

}  // namespace

TEST(Archimedean, DomainChecks) {
    EXPECT_THROW(ArchimedeanModel::clayton(0.0), DomainError);
    EXPECT_THROW(ArchimedeanModel::clayton(-1.5), DomainError);
    EXPECT_NO_THROW(ArchimedeanModel::clayton(-1.0));
    EXPECT_THROW(ArchimedeanModel::frank(0.0), DomainError);
    EXPECT_EQ(parse_family("frank"), CopulaFamily::frank);
    EXPECT_THROW(parse_family("gumbel"), DomainError);
}

TEST(Archimedean, GeneratorShape) {
    for (const auto& m : models()) {
        EXPECT_EQ(m.phi(1.0), 0.0);
        double prev = m.phi(0.01);
        for (int k = 2; k <= 99; ++k) {
            const double t = k / 100.0;
            const double p = m.phi(t);
            EXPECT_LT(p, prev) << to_string(m.family()) << " beta=" << m.beta() << " t=" << t;
            prev = p;
            EXPECT_NEAR(m.phi_inv(p), t, 1e-10);
        }
    }
}

TEST(Archimedean, LowerExamples) {
    EXPECT_NEAR(archimedean_var_lower(ArchimedeanModel::independence(), 2, 0.19), 0.9, 1e-12);
    const double v = archimedean_var_lower(ArchimedeanModel::clayton(1.0), 2, 0.5);
    EXPECT_NEAR(v, 2.0 / 3.0, 1e-12);
    // Clayton beta=1 on the diagonal: C(v,v) = 1 / (2/v - 1).
    EXPECT_NEAR(1.0 / (2.0 / v - 1.0), 0.5, 1e-12);
    for (const auto& m : models()) EXPECT_NEAR(archimedean_var_lower(m, 1, 0.3), 0.7, 1e-10);
}

TEST(Archimedean, UpperExamples) {
    EXPECT_NEAR(archimedean_var_upper(ArchimedeanModel::independence(), 2, 0.25), 0.5, 1e-12);
    EXPECT_NEAR(archimedean_var_upper(ArchimedeanModel::clayton(2.0), 2, 0.5),
                1.0 - std::pow(2.5, -0.5), 1e-12);
    // One component: the survival level alpha sits at 1 - alpha on the uniform scale.
    for (const auto& m : models()) EXPECT_NEAR(archimedean_var_upper(m, 1, 0.3), 0.7, 1e-10);
}

TEST(Archimedean, LevelErrors) {
    const auto m = ArchimedeanModel::clayton(2.0);
    EXPECT_THROW(archimedean_var_lower(m, 2, 0.0), DomainError);
    EXPECT_THROW(archimedean_var_lower(m, 2, 1.0), DomainError);
    EXPECT_THROW(archimedean_var_upper(m, 0, 0.5), DomainError);
}

TEST(Archimedean, DiagonalSelfConsistency) {
    for (const auto& m : models())
        for (int n : {2, 3, 5})
            for (int k = 1; k <= 19; ++k) {
                const double a = 0.05 * k;
                const double v = archimedean_var_lower(m, n, a);
                const std::vector<double> diag(static_cast<std::size_t>(n), v);
                EXPECT_NEAR(m.cdf(diag), 1.0 - a, 1e-9)
                    << to_string(m.family()) << " beta=" << m.beta() << " n=" << n;
            }
}

TEST(Archimedean, CdfMatchesClosedForms) {
    const std::vector<double> p{0.3, 0.7};
    EXPECT_NEAR(ArchimedeanModel::frank(3.0).cdf(p), frank_cdf(3.0, 0.3, 0.7), 1e-13);
    EXPECT_NEAR(ArchimedeanModel::clayton(2.0).cdf(p), clayton_cdf(2.0, 0.3, 0.7), 1e-13);
    EXPECT_NEAR(ArchimedeanModel::independence().cdf(p), 0.21, 1e-15);
}

TEST(ClaytonTable, Examples) {
    EXPECT_NEAR(clayton_table(2.0, 0.5, 2, ClaytonColumn::bernardino_X), 2.0 / 3.0, 1e-12);
    const double d = clayton_table(2.0, 0.5, 2, ClaytonColumn::directional_X);
    EXPECT_NEAR(d, std::pow(2.5, -0.5), 1e-12);
    EXPECT_NEAR(clayton_cdf(2.0, d, d), 0.5, 1e-12);
    EXPECT_NEAR(clayton_table(1e-7, 0.81, 2, ClaytonColumn::directional_X), 0.9, 1e-4);
    EXPECT_NEAR(clayton_table(2.0, 0.3, 2, ClaytonColumn::directional_1mX),
                1.0 - clayton_table(2.0, 0.7, 2, ClaytonColumn::directional_X), 1e-14);
    EXPECT_NEAR(clayton_table(2.0, 0.3, 2, ClaytonColumn::bernardino_1mX),
                1.0 - clayton_table(2.0, 0.7, 2, ClaytonColumn::bernardino_X), 1e-14);
}

TEST(ClaytonTable, BenchmarkErrors) {
    EXPECT_THROW(clayton_table(1.0, 0.5, 2, ClaytonColumn::bernardino_X), DomainError);
    EXPECT_THROW(clayton_table(2.0, 0.5, 3, ClaytonColumn::bernardino_1mX), Unsupported);
    EXPECT_NO_THROW(clayton_table(1.0, 0.5, 3, ClaytonColumn::directional_X));
}

TEST(ClaytonTable, PrintedFormAgreesOnlyInThePlane) {
    double worst = 0.0;
    for (double b : {0.5, 2.0, 5.0})
        for (double a : {0.1, 0.5, 0.9}) {
            EXPECT_NEAR(clayton_directional_printed(b, a, 2),
                        clayton_table(b, a, 2, ClaytonColumn::directional_X), 1e-12);
            worst = std::max(worst, std::abs(clayton_directional_printed(b, a, 3) -
                                             clayton_table(b, a, 3, ClaytonColumn::directional_X)));
        }
    EXPECT_GT(worst, 1e-3);
}

TEST(ClaytonTable, DiagonalPointMonotone) {
    const double betas[] = {0.5, 2.0, 5.0};
    for (double b : betas) {
        double prev = 0.0;
        for (int k = 1; k <= 9; ++k) {
            const double v = clayton_table(b, 0.1 * k, 2, ClaytonColumn::directional_X);
            EXPECT_GT(v, prev);
            prev = v;
        }
    }
    for (int k = 1; k <= 9; ++k) {
        const double a = 0.1 * k;
        EXPECT_GT(clayton_table(0.5, a, 2, ClaytonColumn::directional_X),
                  clayton_table(2.0, a, 2, ClaytonColumn::directional_X));
        EXPECT_GT(clayton_table(2.0, a, 2, ClaytonColumn::directional_X),
                  clayton_table(5.0, a, 2, ClaytonColumn::directional_X));
    }
}

// For an Archimedean copula, given C(U,V) = a, phi(U)/phi(a) is uniform on
// (0,1), so E[U | C = a] = int_0^1 phi^{-1}(w phi(a)) dw.
TEST(ClaytonTable, BenchmarkIsLevelCurveMean) {
    // The integrand has a kink-like layer near w = 0 for strong dependence, so
    // integrate over geometrically graded panels.
    const GaussRule rule = gauss_legendre_unit(40);
    for (double b : {0.5, 2.0, 5.0}) {
        const auto m = ArchimedeanModel::clayton(b);
        for (int k = 1; k <= 9; ++k) {
            const double a = 0.1 * k;
            double mean = 0.0;
            double lo = 0.0;
            for (int p = -12; p <= 0; ++p) {
                const double hi = std::pow(10.0, p);
                for (std::size_t i = 0; i < rule.size(); ++i)
                    mean += (hi - lo) * rule.weights[i] *
                            m.phi_inv((lo + (hi - lo) * rule.nodes[i]) * m.phi(a));
                lo = hi;
            }
            EXPECT_NEAR(clayton_table(b, a, 2, ClaytonColumn::bernardino_X), mean, 1e-8)
                << "beta=" << b << " alpha=" << a;
        }
    }
}

// The level set {C >= a} is convex, so the mean of its boundary curve lies on
// the far side of the diagonal point: the benchmark is at least the
// directional value for the lower measure and at most for the upper one.
TEST(ClaytonTable, BenchmarkVersusDirectionalOrdering) {
    for (double b : {0.5, 2.0, 5.0})
        for (int k = 1; k <= 9; ++k) {
            const double a = 0.1 * k;
            EXPECT_GE(clayton_table(b, a, 2, ClaytonColumn::bernardino_X),
                      clayton_table(b, a, 2, ClaytonColumn::directional_X));
            EXPECT_LE(clayton_table(b, a, 2, ClaytonColumn::bernardino_1mX),
                      clayton_table(b, a, 2, ClaytonColumn::directional_1mX));
        }
}

TEST(FrankDensity, Symmetric) {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> U;
    for (int t = 0; t < 100; ++t) {
        const double a = U(rng), b = U(rng);
        EXPECT_EQ(frank_density(4.0, a, b), frank_density(4.0, b, a));
    }
}

TEST(FrankDensity, IntegratesToOne) {
    for (double b : {-5.0, 2.0, 10.0}) {
        BivariateDirectionalProblem p;
        p.density = frank_density_fn(b);
        EXPECT_NEAR(bivariate_total_mass(p), 1.0, 1e-6) << "beta=" << b;
    }
}

TEST(FrankDensity, MixedPartialOfTheCdf) {
    const double h = 1e-4;
    for (double b : {-5.0, 2.0})
        for (double u : {0.2, 0.5, 0.8})
            for (double v : {0.3, 0.6}) {
                const double fd = (frank_cdf(b, u + h, v + h) - frank_cdf(b, u + h, v - h) -
                                   frank_cdf(b, u - h, v + h) + frank_cdf(b, u - h, v - h)) /
                                  (4.0 * h * h);
                EXPECT_NEAR(frank_density(b, u, v), fd, 1e-5 * std::max(1.0, fd));
            }
}

TEST(FrankDensity, NearIndependence) {
    EXPECT_NEAR(frank_density(0.01, 0.5, 0.5), 1.0, 1e-2);
    EXPECT_THROW(frank_density(0.0, 0.5, 0.5), DomainError);
}

TEST(Bivariate, IndependenceDiagonal) {
    BivariateDirectionalProblem p;
    p.density = independence_density();
    p.theta = kPi / 4.0;
    for (double a : {0.25, 0.04}) {
        p.alpha = a;
        const auto r = bivariate_directional_var(p);
        EXPECT_NEAR(r.point[0], 1.0 - std::sqrt(a), 1e-3);
        EXPECT_NEAR(r.point[1], 1.0 - std::sqrt(a), 1e-3);
    }
}

TEST(Bivariate, IndependenceVertical) {
    // For y0 >= 1/2 the cone {z2 - y0 >= |z1 - 1/2|} meets the square in
    // area (1 - y0)^2.
    BivariateDirectionalProblem p;
    p.density = independence_density();
    p.theta = kPi / 2.0;
    p.alpha = 0.04;
    const auto r = bivariate_directional_var(p);
    EXPECT_NEAR(r.point[0], 0.5, 1e-12);
    EXPECT_NEAR(r.point[1], 0.8, 1e-3);
}

TEST(Bivariate, OrthantProbabilityMatchesFrankCdf) {
    // Direction e: survival 1 - 2t + C(t,t). Direction -e: C(t,t).
    for (double b : {-5.0, 5.0}) {
        BivariateDirectionalProblem up;
        up.density = frank_density_fn(b);
        up.theta = kPi / 4.0;
        BivariateDirectionalProblem down = up;
        down.theta = 5.0 * kPi / 4.0;
        for (double t : {0.2, 0.5, 0.7}) {
            const double c = frank_cdf(b, t, t);
            EXPECT_NEAR(bivariate_orthant_prob(up, t, t), 1.0 - 2.0 * t + c, 1e-9);
            EXPECT_NEAR(bivariate_orthant_prob(down, t, t), c, 1e-9);
        }
    }
}

TEST(Bivariate, ClosureForFrank) {
    for (double b : {-5.0, 5.0})
        for (double th : {kPi / 4.0, kPi / 3.0, kPi / 2.0, 5.0 * kPi / 4.0}) {
            BivariateDirectionalProblem p;
            p.density = frank_density_fn(b);
            p.theta = th;
            p.alpha = 0.2;
            const auto r = bivariate_directional_var(p);
            EXPECT_NEAR(bivariate_orthant_prob(p, r.point[0], r.point[1]), p.alpha, p.tol);
            EXPECT_NEAR(r.point[0], 0.5 + r.lambda * std::cos(th), 1e-12);
            EXPECT_NEAR(r.point[1], 0.5 + r.lambda * std::sin(th), 1e-12);
        }
}

// The Frank copula equals its survival copula, so the direction-e point at
// level a is the reflection through (1/2,1/2) of the direction -e point at
// the same orthant level, and both match the closed form.
TEST(Bivariate, FrankSelfDuality) {
    for (double b : {-5.0, 5.0})
        for (double a : {0.1, 0.3}) {
            BivariateDirectionalProblem p;
            p.density = frank_density_fn(b);
            p.alpha = a;
            p.theta = kPi / 4.0;
            const auto up = bivariate_directional_var(p);
            p.theta = 5.0 * kPi / 4.0;
            const auto down = bivariate_directional_var(p);
            EXPECT_NEAR(up.point[0], 1.0 - down.point[0], 2e-3);
            EXPECT_NEAR(up.point[1], 1.0 - down.point[1], 2e-3);
            const auto model = ArchimedeanModel::frank(b);
            EXPECT_NEAR(up.point[0], archimedean_var_upper(model, 2, a), 2e-3);
            EXPECT_NEAR(down.point[0], archimedean_var_lower(model, 2, 1.0 - a), 2e-3);
        }
}

TEST(Bivariate, FrankNearIndependence) {
    BivariateDirectionalProblem f;
    f.density = frank_density_fn(0.01);
    f.theta = kPi / 3.0;
    f.alpha = 0.2;
    BivariateDirectionalProblem i = f;
    i.density = independence_density();
    const auto rf = bivariate_directional_var(f);
    const auto ri = bivariate_directional_var(i);
    EXPECT_NEAR(rf.point[0], ri.point[0], 1e-2);
    EXPECT_NEAR(rf.point[1], ri.point[1], 1e-2);
}

TEST(Bivariate, MaskedTensorScheme) {
    BivariateDirectionalProblem p;
    p.density = independence_density();
    p.theta = kPi / 4.0;
    p.alpha = 0.25;
    p.scheme = QuadratureScheme::masked_tensor;
    EXPECT_NEAR(bivariate_total_mass(p), 1.0, 1e-12);
    const auto r = bivariate_directional_var(p);
    EXPECT_NEAR(r.point[0], 0.5, 1e-2);
}

TEST(Bivariate, RejectsUnnormalisedDensity) {
    BivariateDirectionalProblem p;
    p.density = [](double, double) { return 2.0; };
    EXPECT_THROW(bivariate_directional_var(p), DomainError);
}

TEST(Quadrature, GaussLegendreExactForPolynomials) {
    const auto rule = gauss_legendre_unit(8);
    for (int k = 0; k <= 15; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
        EXPECT_NEAR(s, 1.0 / (k + 1), 1e-14) << "degree " << k;
    }
}

TEST(Quadrature, PolygonClipAndIntegrate) {
    const std::vector<Point2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto half = clip_half_plane(square, {1.0, 1.0}, {0.5, 0.5});
    EXPECT_NEAR(polygon_area(half), 0.5, 1e-15);
    const auto rule = gauss_legendre_unit(6);
    // int over {x + y >= 1} of x y = 5/24.
    EXPECT_NEAR(integrate_polygon(half, [](double x, double y) { return x * y; }, rule), 5.0 / 24.0,
                1e-14);
}

TEST(Samplers, ClaytonMarginalsAndCdf) {
    const auto s = sample_clayton(2.0, 2, 100000, 42);
    const double crit = 1.628 / std::sqrt(100000.0);
    EXPECT_LT(ks_uniform(s.column(0)), crit);
    EXPECT_LT(ks_uniform(s.column(1)), crit);
    std::size_t both = 0;
    for (std::size_t i = 0; i < s.size(); ++i) both += s(i, 0) <= 0.5 && s(i, 1) <= 0.5;
    EXPECT_NEAR(static_cast<double>(both) / 1e5, std::pow(2.0 * 4.0 - 1.0, -0.5), 0.01);
}

TEST(Samplers, ClaytonDeterministicAndDomain) {
    EXPECT_EQ(sample_clayton(2.0, 3, 500, 9), sample_clayton(2.0, 3, 500, 9));
    EXPECT_FALSE(sample_clayton(2.0, 3, 500, 9) == sample_clayton(2.0, 3, 500, 10));
    EXPECT_THROW(sample_clayton(-0.5, 2, 10, 1), Unsupported);
    EXPECT_THROW(sample_clayton(0.0, 2, 10, 1), Unsupported);
}

TEST(Samplers, FrankCdf) {
    const auto s = sample_frank(5.0, 100000, 7);
    std::size_t both = 0;
    for (std::size_t i = 0; i < s.size(); ++i) both += s(i, 0) <= 0.5 && s(i, 1) <= 0.5;
    EXPECT_NEAR(static_cast<double>(both) / 1e5, frank_cdf(5.0, 0.5, 0.5), 0.01);
    EXPECT_LT(ks_uniform(s.column(1)), 1.628 / std::sqrt(1e5));
}

TEST(Samplers, FrankConcordanceIncreasesWithBeta) {
    const double lo = kendall_tau(sample_frank(-10.0, 2000, 3));
    const double mid = kendall_tau(sample_frank(0.1, 2000, 3));
    const double hi = kendall_tau(sample_frank(10.0, 2000, 3));
    EXPECT_LT(lo, mid);
    EXPECT_LT(mid, hi);
}

TEST(Samplers, FrankDeterministic) {
    EXPECT_EQ(sample_frank(-3.0, 300, 5), sample_frank(-3.0, 300, 5));
    EXPECT_THROW(sample_frank(0.0, 10, 1), DomainError);
}

TEST(Samplers, UniformDeterministic) {
    EXPECT_EQ(sample_uniform(3, 100, 1), sample_uniform(3, 100, 1));
    EXPECT_LT(ks_uniform(sample_uniform(1, 20000, 2).column(0)), 1.628 / std::sqrt(2e4));
}
