#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dvar {

/// Base class of every error raised for bad input or an unsolvable problem.
/// The CLI maps these to exit code 2; anything else is an internal error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDirection : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t expected, std::size_t got)
        : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                std::to_string(got)) {}
};

class DomainError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class Unsupported : public Error {
public:
    using Error::Error;
};

/// The target level is not attained anywhere on the search ray.
class NoSolution : public Error {
public:
    NoSolution(const std::string& what, double lo, double hi)
        : Error(what + " (attainable range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                "])"),
          attainable_lo(lo),
          attainable_hi(hi) {}

    double attainable_lo;
    double attainable_hi;
};

class EmptyBand : public Error {
public:
    using Error::Error;
};

class DecompositionError : public Error {
public:
    using Error::Error;
};

/// Row and column are 1-based, counting data lines (header excluded).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row_, std::size_t col_)
        : Error(what + " at row " + std::to_string(row_) + " col " + std::to_string(col_)),
          row(row_),
          col(col_) {}

    std::size_t row;
    std::size_t col;
};

}  // namespace dvar
