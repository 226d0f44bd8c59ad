#include "dvar/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dvar/errors.hpp"

namespace dvar {

namespace {

constexpr double kUnitTolerance = 1e-8;

std::vector<double> main_diagonal(std::size_t n) {
    return std::vector<double>(n, std::sqrt(static_cast<double>(n)) / static_cast<double>(n));
}

}  // namespace

Direction::Direction(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw InvalidDirection("direction must have dimension >= 1");
    for (double c : coords_)
        if (!std::isfinite(c)) throw InvalidDirection("direction has a non-finite component");
    const double nrm = norm2(coords_);
    if (std::abs(nrm - 1.0) > kUnitTolerance)
        throw InvalidDirection("direction is not a unit vector (norm " + std::to_string(nrm) +
                               ")");
    if (nrm != 1.0)
        for (double& c : coords_) c /= nrm;
}

Direction Direction::normalized(std::vector<double> v) {
    if (v.empty()) throw InvalidDirection("direction must have dimension >= 1");
    const double nrm = norm2(v);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
        throw InvalidDirection("cannot normalise a zero or non-finite vector");
    for (double& c : v) c /= nrm;
    return Direction(std::move(v), Unchecked{});
}

Direction Direction::diagonal(std::size_t n, double sign) {
    if (n == 0) throw InvalidDirection("direction must have dimension >= 1");
    auto d = main_diagonal(n);
    if (sign < 0)
        for (double& c : d) c = -c;
    return Direction(std::move(d), Unchecked{});
}

Direction Direction::from_angle(double theta) {
    return Direction({std::cos(theta), std::sin(theta)}, Unchecked{});
}

Direction Direction::operator-() const {
    auto c = coords_;
    for (double& v : c) v = -v;
    return Direction(std::move(c), Unchecked{});
}

RotationFrame::RotationFrame(Matrix m, Direction d)
    : matrix_(std::move(m)), direction_(std::move(d)), diag_(main_diagonal(direction_.dim())) {}

RotationFrame rotation_frame(const Direction& u) {
    const std::size_t n = u.dim();
    const auto e = main_diagonal(n);
    std::vector<double> v(n);
    double vmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = e[i] - u[i];
        vmax = std::max(vmax, std::abs(v[i]));
    }
    if (vmax <= 1e-12) return RotationFrame(Matrix::identity(n), u);

    const double vtv = dot(v, v);
    Matrix h = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) -= 2.0 * v[i] * v[j] / vtv;
    return RotationFrame(std::move(h), u);
}

RotationFrame opposite_frame(const RotationFrame& f) {
    return RotationFrame(-f.matrix(), -f.direction());
}

RotationFrame rotated_frame(const RotationFrame& f, const Matrix& q) {
    const std::size_t n = f.dim();
    if (q.rows() != n || q.cols() != n) throw DimensionMismatch(n, q.rows());
    if (max_abs_diff(q.transpose() * q, Matrix::identity(n)) > 1e-10)
        throw DomainError("rotated_frame: Q is not orthogonal");
    auto qu = q.apply(f.direction().coords());
    return RotationFrame(f.matrix() * q.transpose(), Direction::normalized(std::move(qu)));
}

OrthantQuery::OrthantQuery(std::vector<double> vertex_, const RotationFrame& frame_)
    : vertex(std::move(vertex_)), frame(frame_) {
    if (vertex.size() != frame.dim()) throw DimensionMismatch(frame.dim(), vertex.size());
}

bool orthant_contains(const OrthantQuery& q, std::span<const double> z, double tol) {
    const std::size_t n = q.frame.dim();
    if (z.size() != n) throw DimensionMismatch(n, z.size());
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = z[i] - q.vertex[i];
    const auto r = q.frame.apply(d);
    return std::all_of(r.begin(), r.end(), [tol](double c) { return c >= -tol; });
}

const char* to_string(DirOrder o) {
    switch (o) {
        case DirOrder::less_equal: return "less_equal";
        case DirOrder::greater_equal: return "greater_equal";
        case DirOrder::equal: return "equal";
        case DirOrder::incomparable: return "incomparable";
    }
    return "?";
}

DirOrder dir_compare(std::span<const double> x, std::span<const double> y,
                     const RotationFrame& frame) {
    const std::size_t n = frame.dim();
    if (x.size() != n) throw DimensionMismatch(n, x.size());
    if (y.size() != n) throw DimensionMismatch(n, y.size());
    const auto rx = frame.apply(x);
    const auto ry = frame.apply(y);
    bool le = true;
    bool ge = true;
    for (std::size_t i = 0; i < n; ++i) {
        le = le && rx[i] <= ry[i];
        ge = ge && rx[i] >= ry[i];
    }
    if (le && ge) return DirOrder::equal;
    if (le) return DirOrder::less_equal;
    if (ge) return DirOrder::greater_equal;
    return DirOrder::incomparable;
}

}  // namespace dvar
