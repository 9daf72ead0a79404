/// \file types.hpp
/// Shared scalar/vector/matrix aliases and the error hierarchy.

#ifndef KSHIFT_TYPES_HPP
#define KSHIFT_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace kshift {

// All solver arithmetic is complex double precision; real problems are
// carried with zero imaginary parts. Dense storage is column-major.
using Scalar = std::complex<double>;
using Real = double;
using Index = Eigen::Index;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

enum class Field { Real, Complex };

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite or structurally malformed input.
struct InvalidInputError : Error {
  using Error::Error;
};

/// A reduced matrix is singular to working tolerance (e.g. a shift
/// coincides with a Ritz or harmonic Ritz value).
struct SingularityError : Error {
  using Error::Error;
};

/// An iterative kernel (eigensolver) failed to converge.
struct NumericalFailureError : Error {
  using Error::Error;
};

/// Harmonic Ritz extraction failed; caller may fall back to regular Ritz.
struct DeflationFailureError : Error {
  using Error::Error;
};

/// The rank-one correction factor 1 - gamma is numerically zero.
struct DegenerateCorrectionError : Error {
  using Error::Error;
};

/// File or spec syntax error; message carries the line number.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace kshift

#endif
