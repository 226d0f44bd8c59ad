#include "dvar/sample.hpp"

#include <algorithm>
#include <cmath>

#include "dvar/errors.hpp"

namespace dvar {

Sample::Sample(std::size_t m, std::size_t n, std::vector<double> data,
               std::vector<std::string> column_names)
    : m_(m), n_(n), data_(std::move(data)), mean_(n, 0.0), names_(std::move(column_names)) {
    if (m_ == 0) throw DomainError("sample must contain at least one observation");
    if (n_ == 0) throw DomainError("sample must have at least one column");
    if (data_.size() != m_ * n_) throw DimensionMismatch(m_ * n_, data_.size());
    if (!names_.empty() && names_.size() != n_) throw DimensionMismatch(n_, names_.size());
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            const double v = data_[i * n_ + j];
            if (!std::isfinite(v))
                throw DomainError("sample entry (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") is not finite");
            mean_[j] += v;
        }
    for (double& v : mean_) v /= static_cast<double>(m_);
}

Sample Sample::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DomainError("sample must contain at least one observation");
    const std::size_t n = rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * n);
    for (const auto& r : rows) {
        if (r.size() != n) throw DimensionMismatch(n, r.size());
        data.insert(data.end(), r.begin(), r.end());
    }
    return Sample(rows.size(), n, std::move(data));
}

std::vector<double> Sample::column(std::size_t j) const {
    std::vector<double> c(m_);
    for (std::size_t i = 0; i < m_; ++i) c[i] = data_[i * n_ + j];
    return c;
}

double Sample::scale() const {
    double best = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
        double ss = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            const double d = data_[i * n_ + j] - mean_[j];
            ss += d * d;
        }
        best = std::max(best, std::sqrt(ss / static_cast<double>(m_)));
    }
    return best > 0.0 ? best : 1.0;
}

Sample Sample::affine(double c, std::span<const double> b) const {
    if (b.size() != n_) throw DimensionMismatch(n_, b.size());
    std::vector<double> out(data_.size());
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < n_; ++j) out[i * n_ + j] = c * data_[i * n_ + j] + b[j];
    return Sample(m_, n_, std::move(out), names_);
}

Sample Sample::transformed(const Matrix& q) const {
    if (q.cols() != n_) throw DimensionMismatch(n_, q.cols());
    const std::size_t k = q.rows();
    std::vector<double> out(m_ * k);
    for (std::size_t i = 0; i < m_; ++i)
        q.apply_into(row(i), std::span<double>(out.data() + i * k, k));
    return Sample(m_, k, std::move(out));
}

Sample Sample::negated() const {
    std::vector<double> out(data_);
    for (double& v : out) v = -v;
    return Sample(m_, n_, std::move(out), names_);
}

std::vector<double> Sample::project(std::span<const double> w) const {
    if (w.size() != n_) throw DimensionMismatch(n_, w.size());
    std::vector<double> z(m_);
    for (std::size_t i = 0; i < m_; ++i) z[i] = dot(w, row(i));
    return z;
}

}  // namespace dvar
