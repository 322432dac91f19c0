#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace snb {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameter or argument (lambda <= 1 where a fixed point is needed,
/// migration rate outside [0,1], malformed window, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A population value left the representable range. Carries the cell and
/// the generation at which the blow-up was detected; row/col are -1 when the
/// state has no lattice position (single cell or reduced system).
class OverflowError : public Error {
public:
    OverflowError(const std::string& what, std::int64_t row, std::int64_t col,
                  std::uint64_t generation)
        : Error(what), row_(row), col_(col), generation_(generation) {}

    std::int64_t row() const noexcept { return row_; }
    std::int64_t col() const noexcept { return col_; }
    std::uint64_t generation() const noexcept { return generation_; }

private:
    std::int64_t row_;
    std::int64_t col_;
    std::uint64_t generation_;
};

/// Rank collapse in the QR cocycle: a diagonal entry of R fell below 1e-300.
class SingularFactorError : public Error {
public:
    SingularFactorError(const std::string& what, std::uint64_t iterate)
        : Error(what), iterate_(iterate) {}
    std::uint64_t iterate() const noexcept { return iterate_; }

private:
    std::uint64_t iterate_;
};

class EmptyAccumulatorError : public Error {
public:
    using Error::Error;
};

class TooFewSamplesError : public Error {
public:
    using Error::Error;
};

class NoConvergenceError : public Error {
public:
    using Error::Error;
};

class SingularJacobianError : public Error {
public:
    using Error::Error;
};

class CurveNotBracketedError : public Error {
public:
    CurveNotBracketedError(const std::string& what, double mu_x)
        : Error(what), mu_x_(mu_x) {}
    double mu_x() const noexcept { return mu_x_; }

private:
    double mu_x_;
};

/// Malformed file or configuration (snapshot header, sweep config, journal).
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace snb
