#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace dvar {

/// Gauss-Legendre rule with nodes and weights mapped to [0,1] (weights sum
/// to 1). Exact for polynomials of degree <= 2 * size - 1.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

GaussRule gauss_legendre_unit(std::size_t n);

using Point2 = std::array<double, 2>;

/// Sutherland-Hodgman clip of a convex polygon (counter-clockwise) by the
/// half-plane {z : normal . (z - origin) >= 0}.
std::vector<Point2> clip_half_plane(const std::vector<Point2>& polygon, const Point2& normal,
                                    const Point2& origin);

double polygon_area(const std::vector<Point2>& polygon);

/// Integral of f over a convex polygon: fan triangulation, each triangle
/// mapped from the unit square by the collapsed (Duffy) transform.
double integrate_polygon(const std::vector<Point2>& polygon,
                         const std::function<double(double, double)>& f, const GaussRule& rule);

}  // namespace dvar
