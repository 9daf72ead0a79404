#include "kshift/smallmat.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace kshift {

namespace {

constexpr double kRankTol = 1e-14;

void require_finite(const Matrix& M, const char* who) {
  if (!M.allFinite()) {
    throw InvalidInputError(std::string(who) + ": non-finite entries");
  }
}

}  // namespace

QRFactors qr_factor(const Matrix& M) {
  require_finite(M, "qr_factor");
  const Index p = M.rows();
  const Index q = M.cols();
  if (q < 1 || p < q) {
    throw InvalidInputError("qr_factor: need p >= q >= 1, got " +
                            std::to_string(p) + "x" + std::to_string(q));
  }
  Eigen::HouseholderQR<Matrix> qr(M);
  Matrix Q = qr.householderQ() * Matrix::Identity(p, p);
  Matrix R = Matrix::Zero(p, q);
  R.topRows(q) =
      qr.matrixQR().topRows(q).template triangularView<Eigen::Upper>();
  // Normalize so R's diagonal is real and nonnegative; Q absorbs the phase.
  for (Index j = 0; j < q; ++j) {
    const double a = std::abs(R(j, j));
    if (a > 0.0) {
      const Scalar phase = R(j, j) / a;
      R.row(j) *= std::conj(phase);
      Q.col(j) *= phase;
    }
  }
  return {std::move(Q), std::move(R)};
}

LeastSquaresResult least_squares(const Matrix& M, const Vector& rhs) {
  require_finite(M, "least_squares");
  const Index p = M.rows();
  const Index q = M.cols();
  if (q < 1 || p < q) {
    throw InvalidInputError("least_squares: need p >= q >= 1");
  }
  if (rhs.size() != p) {
    throw InvalidInputError("least_squares: rhs length mismatch");
  }
  Eigen::HouseholderQR<Matrix> qr(M);
  const double scale = M.norm();
  for (Index j = 0; j < q; ++j) {
    if (std::abs(qr.matrixQR()(j, j)) < kRankTol * scale) {
      throw SingularityError("least_squares: rank-deficient at column " +
                             std::to_string(j + 1));
    }
  }
  Vector qtb = qr.householderQ().adjoint() * rhs;
  LeastSquaresResult out;
  out.d = qr.matrixQR()
              .topRows(q)
              .template triangularView<Eigen::Upper>()
              .solve(qtb.head(q));
  out.resnorm = (p > q) ? qtb.tail(p - q).norm() : 0.0;
  return out;
}

Vector solve_square(const Matrix& M, const Vector& rhs) {
  require_finite(M, "solve_square");
  const Index q = M.rows();
  if (M.cols() != q || q < 1) {
    throw InvalidInputError("solve_square: matrix not square");
  }
  if (rhs.size() != q) {
    throw InvalidInputError("solve_square: rhs length mismatch");
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(M);
  // Pivoted R has nonincreasing diagonal magnitudes; the last one is the
  // rank witness.
  const double tail = std::abs(qr.matrixR()(q - 1, q - 1));
  if (tail < kRankTol * M.norm()) {
    throw SingularityError("solve_square: matrix singular to tolerance");
  }
  return qr.solve(rhs);
}

Vector solve_upper_triangular(const Matrix& R, const Vector& y) {
  const Index q = y.size();
  if (R.rows() < q || R.cols() < q) {
    throw InvalidInputError("solve_upper_triangular: block too small");
  }
  const double scale = R.norm();
  for (Index j = 0; j < q; ++j) {
    if (std::abs(R(j, j)) < kRankTol * scale) {
      throw SingularityError("solve_upper_triangular: zero pivot at column " +
                             std::to_string(j + 1));
    }
  }
  return R.topLeftCorner(q, q)
      .template triangularView<Eigen::Upper>()
      .solve(y);
}

std::vector<EigenPair> small_eig(const Matrix& M) {
  require_finite(M, "small_eig");
  const Index q = M.rows();
  if (M.cols() != q || q < 1) {
    throw InvalidInputError("small_eig: matrix not square");
  }
  Eigen::ComplexEigenSolver<Matrix> es(M, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) {
    throw NumericalFailureError("small_eig: eigensolver failed to converge");
  }
  std::vector<EigenPair> pairs;
  pairs.reserve(q);
  for (Index j = 0; j < q; ++j) {
    Vector v = es.eigenvectors().col(j);
    v /= v.norm();
    pairs.push_back({es.eigenvalues()(j), std::move(v)});
  }
  return pairs;
}

}  // namespace kshift
