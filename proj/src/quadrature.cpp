#include "dvar/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "dvar/errors.hpp"

namespace dvar {

GaussRule gauss_legendre_unit(std::size_t n) {
    if (n == 0) throw DomainError("Gauss-Legendre rule needs at least one node");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n from the Chebyshev-like initial guess; the
    // roots are symmetric so only half are computed.
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (std::size_t k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                const double kd = static_cast<double>(k);
                p0 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p2) / kd;
            }
            dp = static_cast<double>(n) * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map [-1,1] -> [0,1]; ascending order.
        rule.nodes[i] = 0.5 * (1.0 - x);
        rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = 0.5 * w;
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

std::vector<Point2> clip_half_plane(const std::vector<Point2>& polygon, const Point2& normal,
                                    const Point2& origin) {
    std::vector<Point2> out;
    const std::size_t k = polygon.size();
    if (k == 0) return out;
    auto side = [&](const Point2& p) {
        return normal[0] * (p[0] - origin[0]) + normal[1] * (p[1] - origin[1]);
    };
    for (std::size_t i = 0; i < k; ++i) {
        const Point2& a = polygon[i];
        const Point2& b = polygon[(i + 1) % k];
        const double sa = side(a);
        const double sb = side(b);
        if (sa >= 0.0) out.push_back(a);
        if ((sa >= 0.0) != (sb >= 0.0)) {
            const double t = sa / (sa - sb);
            out.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
        }
    }
    return out;
}

double polygon_area(const std::vector<Point2>& polygon) {
    double s = 0.0;
    const std::size_t k = polygon.size();
    for (std::size_t i = 0; i < k; ++i) {
        const Point2& a = polygon[i];
        const Point2& b = polygon[(i + 1) % k];
        s += a[0] * b[1] - b[0] * a[1];
    }
    return 0.5 * s;
}

double integrate_polygon(const std::vector<Point2>& polygon,
                         const std::function<double(double, double)>& f, const GaussRule& rule) {
    if (polygon.size() < 3) return 0.0;
    const Point2& a = polygon[0];
    double total = 0.0;
    for (std::size_t t = 1; t + 1 < polygon.size(); ++t) {
        const Point2& b = polygon[t];
        const Point2& c = polygon[t + 1];
        const double twice_area =
            std::abs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
        if (twice_area == 0.0) continue;
        double s = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double xi = rule.nodes[i];
            double inner = 0.0;
            for (std::size_t j = 0; j < rule.size(); ++j) {
                const double eta = rule.nodes[j];
                const double px = a[0] + xi * (b[0] - a[0]) + xi * eta * (c[0] - b[0]);
                const double py = a[1] + xi * (b[1] - a[1]) + xi * eta * (c[1] - b[1]);
                inner += rule.weights[j] * f(px, py);
            }
            s += rule.weights[i] * xi * inner;
        }
        total += s * twice_area;
    }
    return total;
}

}  // namespace dvar
