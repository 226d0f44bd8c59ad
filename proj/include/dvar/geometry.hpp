#pragma once

// Oriented orthants and the directional partial order.
//
// An orthant with vertex x in direction u is {z : R_u (z - x) >= 0}, where
// R_u is an orthogonal matrix sending u to the main diagonal
// e = (1,...,1)/sqrt(n). R_u is not unique for n >= 3; the canonical choice
// here is the Householder reflection swapping u and e. Operations that need
// a related frame (for -u, or for Q u) take it explicitly; build those with
// opposite_frame() and rotated_frame() so that the pair stays consistent.

#include <cstddef>
#include <span>
#include <vector>

#include "dvar/linalg.hpp"

namespace dvar {

/// Unit vector fixing the orientation of the analysis.
class Direction {
public:
    /// Accepts coordinates whose Euclidean norm is within 1e-8 of 1 and
    /// renormalises them; anything else is an InvalidDirection.
    explicit Direction(std::vector<double> coords);

    /// Scales an arbitrary nonzero vector to unit length.
    static Direction normalized(std::vector<double> v);
    /// sign * e, with e = (1,...,1)/sqrt(n).
    static Direction diagonal(std::size_t n, double sign = 1.0);
    /// (cos theta, sin theta).
    static Direction from_angle(double theta);

    std::size_t dim() const { return coords_.size(); }
    std::span<const double> coords() const { return coords_; }
    double operator[](std::size_t i) const { return coords_[i]; }

    Direction operator-() const;

    bool operator==(const Direction&) const = default;

private:
    struct Unchecked {};
    Direction(std::vector<double> coords, Unchecked) : coords_(std::move(coords)) {}

    std::vector<double> coords_;
};

/// An orthogonal matrix R with R * direction = diag.
class RotationFrame {
public:
    const Matrix& matrix() const { return matrix_; }
    const Direction& direction() const { return direction_; }
    std::span<const double> diag() const { return diag_; }
    std::size_t dim() const { return direction_.dim(); }

    Vector apply(std::span<const double> x) const { return matrix_.apply(x); }
    void apply_into(std::span<const double> x, std::span<double> out) const {
        matrix_.apply_into(x, out);
    }

private:
    RotationFrame(Matrix m, Direction d);

    friend RotationFrame rotation_frame(const Direction& u);
    friend RotationFrame opposite_frame(const RotationFrame& f);
    friend RotationFrame rotated_frame(const RotationFrame& f, const Matrix& q);

    Matrix matrix_;
    Direction direction_;
    std::vector<double> diag_;
};

/// Canonical Householder frame: identity when u == e, otherwise
/// H = I - 2 v v^T / (v^T v) with v = e - u.
RotationFrame rotation_frame(const Direction& u);

/// Frame for -u given the frame for u: the matrix -R_u.
RotationFrame opposite_frame(const RotationFrame& f);

/// Frame for Q u given the frame for u: the matrix R_u Q^T. Q must be
/// orthogonal (checked to 1e-10).
RotationFrame rotated_frame(const RotationFrame& f, const Matrix& q);

/// The oriented orthant with the given vertex.
struct OrthantQuery {
    OrthantQuery(std::vector<double> vertex_, const RotationFrame& frame_);

    std::vector<double> vertex;
    RotationFrame frame;
};

/// True iff every component of R (z - vertex) is >= -tol.
bool orthant_contains(const OrthantQuery& q, std::span<const double> z, double tol = 0.0);

enum class DirOrder { less_equal, greater_equal, equal, incomparable };

const char* to_string(DirOrder o);

/// Classifies (x, y) under the directional order: x <=_u y iff R x <= R y
/// componentwise.
DirOrder dir_compare(std::span<const double> x, std::span<const double> y,
                     const RotationFrame& frame);

/// x <=_u y, counting equality.
inline bool dir_less_equal(std::span<const double> x, std::span<const double> y,
                           const RotationFrame& frame) {
    const DirOrder o = dir_compare(x, y, frame);
    return o == DirOrder::less_equal || o == DirOrder::equal;
}

}  // namespace dvar
