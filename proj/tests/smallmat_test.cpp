#include "kshift/smallmat.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace kshift;
using namespace kshift::testsup;

TEST_SUITE_BEGIN("smallmat");

TEST_CASE("qr of a 2x1 column gives the pythagorean norm") {
  Matrix M(2, 1);
  M << Scalar(3.0), Scalar(4.0);
  const QRFactors qr = qr_factor(M);
  CHECK(qr.R(0, 0).real() == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(std::abs(qr.R(1, 0)) == doctest::Approx(0.0));
  CHECK(qr.Q(0, 0).real() == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(qr.Q(1, 0).real() == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("qr of leading identity columns is the identity factorization") {
  const Index m = 5;
  Matrix M = Matrix::Identity(m + 1, m);
  const QRFactors qr = qr_factor(M);
  CHECK((qr.Q - Matrix::Identity(m + 1, m + 1)).norm() < 1e-14);
  CHECK((qr.R - M).norm() < 1e-14);
}

TEST_CASE("qr of a random 6x5 hessenberg recomposes") {
  const Matrix M = random_hessenberg(6, 5, 42);
  const QRFactors qr = qr_factor(M);
  CHECK((qr.Q * qr.R - M).norm() <= 1e-12 * M.norm());
  CHECK((qr.Q.adjoint() * qr.Q - Matrix::Identity(6, 6)).norm() <= 6e-12);
  // R strictly zero below the diagonal
  for (Index j = 0; j < 5; ++j) {
    for (Index i = j + 1; i < 6; ++i) {
      CHECK(std::abs(qr.R(i, j)) == 0.0);
    }
  }
  CHECK((qr.Q.adjoint() * M - qr.R).norm() <= 1e-12 * M.norm());
}

TEST_CASE("qr rejects non-finite input") {
  Matrix M(2, 1);
  M << Scalar(1.0), Scalar(std::nan(""));
  CHECK_THROWS_AS((void)qr_factor(M), InvalidInputError);
}

TEST_CASE("least squares splits an orthogonal component") {
  Matrix M(2, 1);
  M << Scalar(1.0), Scalar(0.0);
  Vector rhs(2);
  rhs << Scalar(2.0), Scalar(3.0);
  const LeastSquaresResult r = least_squares(M, rhs);
  CHECK(r.d(0).real() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.resnorm == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("least squares of rhs orthogonal to the range is zero") {
  Matrix M = random_matrix(6, 3, 7);
  // Build a vector orthogonal to range(M) by projecting out.
  const QRFactors qr = qr_factor(M);
  Vector rhs = qr.Q.col(5);
  const LeastSquaresResult r = least_squares(M, rhs);
  CHECK(r.d.norm() < 1e-12);
  CHECK(r.resnorm == doctest::Approx(rhs.norm()).epsilon(1e-12));
}

TEST_CASE("least squares matches the normal equations oracle") {
  const Matrix M = random_matrix(7, 4, 3);
  const Vector rhs = random_matrix(7, 1, 4).col(0);
  const LeastSquaresResult r = least_squares(M, rhs);
  const Vector d_oracle = normal_equations_lsq(M, rhs);
  CHECK((r.d - d_oracle).norm() <= 1e-10 * d_oracle.norm());
  // residual orthogonality invariant
  CHECK((M.adjoint() * (rhs - M * r.d)).norm() <=
        1e-10 * M.norm() * rhs.norm());
  CHECK(r.resnorm == doctest::Approx((rhs - M * r.d).norm()).epsilon(1e-10));
}

TEST_CASE("least squares names the rank-deficient column") {
  Matrix M(4, 3);
  M.col(0) = random_matrix(4, 1, 9).col(0);
  M.col(1) = random_matrix(4, 1, 10).col(0);
  M.col(2) = M.col(0) + M.col(1);  // dependent third column
  const Vector rhs = random_matrix(4, 1, 11).col(0);
  CHECK_THROWS_WITH_AS((void)least_squares(M, rhs),
                       doctest::Contains("column 3"), SingularityError);
}

TEST_CASE("solve_square on identity and diagonal") {
  Vector rhs(2);
  rhs << Scalar(2.0), Scalar(8.0);
  CHECK((solve_square(Matrix::Identity(2, 2), rhs) - rhs).norm() < 1e-14);
  Matrix D = Matrix::Zero(2, 2);
  D(0, 0) = Scalar(2.0);
  D(1, 1) = Scalar(4.0);
  const Vector x = solve_square(D, rhs);
  CHECK(x(0).real() == doctest::Approx(1.0));
  CHECK(x(1).real() == doctest::Approx(2.0));
}

TEST_CASE("solve_square residual is small on a random well-conditioned 8x8") {
  Matrix M = random_matrix(8, 8, 21);
  M += 4.0 * Matrix::Identity(8, 8);
  const Vector rhs = random_matrix(8, 1, 22).col(0);
  const Vector x = solve_square(M, rhs);
  CHECK((M * x - rhs).norm() <= 1e-12 * (M.norm() * x.norm() + rhs.norm()));
}

TEST_CASE("solve_square detects singularity") {
  Matrix M(2, 2);
  M << Scalar(1.0), Scalar(2.0), Scalar(2.0), Scalar(4.0);
  Vector rhs(2);
  rhs << Scalar(1.0), Scalar(1.0);
  CHECK_THROWS_AS((void)solve_square(M, rhs), SingularityError);
}

TEST_CASE("small_eig of a diagonal matrix returns coordinate pairs") {
  Matrix M = Matrix::Zero(3, 3);
  M(0, 0) = Scalar(1.0);
  M(1, 1) = Scalar(2.0);
  M(2, 2) = Scalar(3.0);
  auto pairs = small_eig(M);
  REQUIRE(pairs.size() == 3);
  std::vector<double> values;
  for (const auto& p : pairs) {
    values.push_back(p.value.real());
    CHECK(std::abs(p.value.imag()) < 1e-14);
    CHECK(p.vector.norm() == doctest::Approx(1.0).epsilon(1e-14));
    // coordinate eigenvector: one dominant entry
    Index imax = 0;
    p.vector.cwiseAbs().maxCoeff(&imax);
    CHECK(std::abs(p.vector(imax)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  std::sort(values.begin(), values.end());
  CHECK(values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(values[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(values[2] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("small_eig of the rotation matrix gives +-i") {
  Matrix M(2, 2);
  M << Scalar(0.0), Scalar(-1.0), Scalar(1.0), Scalar(0.0);
  auto pairs = small_eig(M);
  REQUIRE(pairs.size() == 2);
  double imsum = 0.0;
  for (const auto& p : pairs) {
    CHECK(std::abs(p.value.real()) < 1e-14);
    CHECK(std::abs(std::abs(p.value.imag()) - 1.0) < 1e-14);
    imsum += p.value.imag();
  }
  CHECK(std::abs(imsum) < 1e-14);  // conjugate pair
}

TEST_CASE("small_eig residual bound on a random 10x10") {
  const Matrix M = random_matrix(10, 10, 33);
  for (const auto& p : small_eig(M)) {
    CHECK((M * p.vector - p.value * p.vector).norm() <= 1e-10 * M.norm());
    CHECK(p.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("solve_upper_triangular rejects a zero pivot") {
  Matrix R = Matrix::Zero(3, 3);
  R(0, 0) = Scalar(1.0);
  R(1, 1) = Scalar(0.0);
  R(2, 2) = Scalar(1.0);
  R(0, 1) = Scalar(2.0);
  Vector y = Vector::Ones(3);
  CHECK_THROWS_AS((void)solve_upper_triangular(R, y), SingularityError);
}

TEST_SUITE_END();
