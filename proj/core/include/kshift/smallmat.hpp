/// \file smallmat.hpp
/// Dense small-matrix kernels: Householder QR, least squares, square and
/// triangular solves, small dense eigenproblems. Sizes here are O(m) with
/// m around 100, so everything is formed explicitly.

#ifndef KSHIFT_SMALLMAT_HPP
#define KSHIFT_SMALLMAT_HPP

#include "kshift/types.hpp"

#include <vector>

namespace kshift {

/// Explicit factors M = Q R with Q (p x p) unitary and R (p x q) upper
/// triangular. R's diagonal is normalized to be real and nonnegative.
struct QRFactors {
  Matrix Q;
  Matrix R;
};

struct LeastSquaresResult {
  Vector d;
  double resnorm = 0.0;
};

struct EigenPair {
  Scalar value;
  Vector vector;
};

/// Householder QR of a p x q matrix, p >= q >= 1.
QRFactors qr_factor(const Matrix& M);

/// Minimize ||rhs - M d||_2 for full-column-rank M (p x q, p >= q).
/// Throws SingularityError naming the offending column when an R diagonal
/// entry falls below 1e-14 * ||M||_F.
LeastSquaresResult least_squares(const Matrix& M, const Vector& rhs);

/// Solve M x = rhs for square M; rank check via column-pivoted QR.
Vector solve_square(const Matrix& M, const Vector& rhs);

/// Solve the leading q x q upper-triangular block of R against y by back
/// substitution. Throws SingularityError on a diagonal entry below
/// 1e-14 * ||R||_F.
Vector solve_upper_triangular(const Matrix& R, const Vector& y);

/// All eigenpairs of a small square matrix; eigenvectors unit norm.
std::vector<EigenPair> small_eig(const Matrix& M);

}  // namespace kshift

#endif
