#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dvar/linalg.hpp"

namespace dvar {

/// Immutable m x n table of observations (rows) with its column means.
class Sample {
public:
    /// data is row-major with data.size() == m * n. Throws on m == 0,
    /// n == 0, or a non-finite entry.
    Sample(std::size_t m, std::size_t n, std::vector<double> data,
           std::vector<std::string> column_names = {});

    static Sample from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return m_; }
    std::size_t dim() const { return n_; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    std::span<const double> mean() const { return mean_; }
    const std::vector<double>& data() const { return data_; }
    const std::vector<std::string>& column_names() const { return names_; }

    std::vector<double> column(std::size_t j) const;
    /// Largest per-column standard deviation; 1 when every column is constant.
    double scale() const;

    /// Sample of c * x + b for every row.
    Sample affine(double c, std::span<const double> b) const;
    /// Sample of Q x for every row.
    Sample transformed(const Matrix& q) const;
    /// Sample of -x for every row.
    Sample negated() const;
    /// Sample of w' x for every row (a single column).
    std::vector<double> project(std::span<const double> w) const;

    bool operator==(const Sample& o) const {
        return m_ == o.m_ && n_ == o.n_ && data_ == o.data_ && names_ == o.names_;
    }

private:
    std::size_t m_;
    std::size_t n_;
    std::vector<double> data_;
    std::vector<double> mean_;
    std::vector<std::string> names_;
};

}  // namespace dvar
