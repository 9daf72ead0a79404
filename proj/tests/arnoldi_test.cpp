#include "kshift/arnoldi.hpp"

#include "kshift/shifted_solvers.hpp"
#include "kshift/smallmat.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace kshift;
using namespace kshift::testsup;

namespace {

LinearOperator identity_operator(Index n) {
  LinearOperator op;
  op.n = n;
  op.field = Field::Real;
  op.apply_fn = [](const Vector& v, Vector& out) { out = v; };
  return op;
}

}  // namespace

TEST_SUITE_BEGIN("arnoldi");

TEST_CASE("identity operator breaks down after one step") {
  const LinearOperator op = identity_operator(6);
  const Vector v0 = random_rhs(6, 2, Field::Real);
  KrylovFactorization fact = arnoldi_seed(v0, 4);
  extend_arnoldi(op, fact, 4);
  CHECK(fact.breakdown);
  CHECK(fact.size == 1);
  CHECK(fact.Hbar(0, 0) == Scalar(1.0));
  CHECK(fact.Hbar(1, 0) == Scalar(0.0));
}

TEST_CASE("full factorization of the small bidiagonal matrix") {
  const LinearOperator op = bidiagonal_operator(10);
  const Vector v0 = random_rhs(10, 3, Field::Real);
  KrylovFactorization fact = arnoldi_seed(v0, 10);
  long mv = 0;
  extend_arnoldi(op, fact, 10, &mv);
  CHECK(mv == 10);
  CHECK(fact.size == 10);
  CHECK(orthonormality_defect(fact) < 1e-12);
  CHECK(recurrence_defect(op, fact) < 1e-12);
  // Hessenberg structure below the first subdiagonal
  for (Index j = 0; j < 10; ++j) {
    for (Index i = j + 2; i <= 10; ++i) {
      CHECK(std::abs(fact.Hbar(i, j)) == 0.0);
    }
  }
}

TEST_CASE("krylov subspaces are shift invariant") {
  const LinearOperator op = bidiagonal_operator(30);
  const LinearOperator op_shifted =
      shifted_operator(bidiagonal_operator(30), Scalar(-2.0));
  const Vector v0 = random_rhs(30, 4, Field::Real);
  KrylovFactorization fa = arnoldi_seed(v0, 5);
  extend_arnoldi(op, fa, 5);
  KrylovFactorization fb = arnoldi_seed(v0, 5);
  extend_arnoldi(op_shifted, fb, 5);
  const double angle = max_principal_angle(fa.V.leftCols(5), fb.V.leftCols(5));
  CHECK(angle <= 1e-8);
}

TEST_CASE("ritz values of an exactly captured diagonal matrix") {
  Matrix A = Matrix::Zero(3, 3);
  A(0, 0) = Scalar(1.0);
  A(1, 1) = Scalar(2.0);
  A(2, 2) = Scalar(3.0);
  const LinearOperator op = dense_operator(A, Field::Real);
  const Vector v0 = Vector::Ones(3);
  KrylovFactorization fact = arnoldi_seed(v0, 3);
  extend_arnoldi(op, fact, 3);
  auto values = ritz_values(fact);
  REQUIRE(values.size() == 3);
  CHECK(std::abs(values[0] - Scalar(1.0)) < 1e-10);
  CHECK(std::abs(values[1] - Scalar(2.0)) < 1e-10);
  CHECK(std::abs(values[2] - Scalar(3.0)) < 1e-10);
}

TEST_CASE("single ritz value is the rayleigh quotient") {
  const LinearOperator op = bidiagonal_operator(20);
  const Vector v = random_rhs(20, 6, Field::Real);
  KrylovFactorization fact = arnoldi_seed(v, 5);
  extend_arnoldi(op, fact, 1);
  const Vector u = v / v.norm();
  const Scalar rq = u.dot(op.apply(u));
  auto values = ritz_values(fact);
  REQUIRE(values.size() == 1);
  CHECK(std::abs(values[0] - rq) < 1e-12);
}

TEST_CASE("ritz values sit inside the field-of-values box of H") {
  const LinearOperator op = bidiagonal_operator(1000);
  const Vector v0 = random_rhs(1000, 8, Field::Real);
  KrylovFactorization fact = arnoldi_seed(v0, 40);
  extend_arnoldi(op, fact, 40);
  const Matrix H = fact.square_block();
  // Bounding box from the hermitian and skew parts of the compression.
  const Matrix Hh = 0.5 * (H + H.adjoint());
  const Matrix Hs = 0.5 * (H - H.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eh(Hh);
  Eigen::SelfAdjointEigenSolver<Matrix> es(Scalar(0, -1) * Hs);
  const double re_lo = eh.eigenvalues().minCoeff() - 1e-8;
  const double re_hi = eh.eigenvalues().maxCoeff() + 1e-8;
  const double im_hi = es.eigenvalues().cwiseAbs().maxCoeff() + 1e-8;
  for (Scalar theta : ritz_values(fact)) {
    CHECK(theta.real() >= re_lo);
    CHECK(theta.real() <= re_hi);
    CHECK(std::abs(theta.imag()) <= im_hi);
  }
}

TEST_CASE("harmonic ritz values of a full krylov space match the spectrum") {
  Matrix A = random_matrix(8, 8, 11);
  A += 2.0 * Matrix::Identity(8, 8);
  const LinearOperator op = dense_operator(A);
  const Vector v0 = random_rhs(8, 12, Field::Complex);
  KrylovFactorization fact = arnoldi_seed(v0, 8);
  extend_arnoldi(op, fact, 8);
  REQUIRE(fact.size == 8);  // breakdown at full dimension
  auto set = harmonic_ritz(fact, 3);
  auto dense = small_eig(A);
  std::vector<Scalar> expect;
  for (const auto& p : dense) {
    expect.push_back(p.value);
  }
  std::stable_sort(expect.begin(), expect.end(), [](Scalar a, Scalar b) {
    return std::abs(a) < std::abs(b);
  });
  REQUIRE(set.values.size() == 8);
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(std::abs(set.values[j] - expect[j]) <= 1e-8 * std::abs(expect[j]));
  }
}

TEST_CASE("harmonic ritz values of an hpd matrix are real and positive") {
  Matrix B = random_matrix(12, 12, 13);
  Matrix A = B.adjoint() * B + 12.0 * Matrix::Identity(12, 12);
  const LinearOperator op = dense_operator(A);
  KrylovFactorization fact = arnoldi_seed(random_rhs(12, 14, Field::Complex),
                                          6);
  extend_arnoldi(op, fact, 6);
  auto set = harmonic_ritz(fact, 2);
  for (Scalar theta : set.values) {
    CHECK(theta.real() > 0.0);
    CHECK(std::abs(theta.imag()) <= 1e-10 * std::abs(theta));
  }
}

TEST_CASE("harmonic values avoid the base shift where ritz values do not") {
  // 50 restarted cycles at m=40 on the bidiagonal matrix, base 0.4: the
  // harmonic values (the GMRES polynomial roots) keep clear of the shift,
  // the regular Ritz values do not.
  const LinearOperator op = bidiagonal_operator(1000);
  const ShiftSet shifts{{Scalar(0.4)}};
  const Vector b = random_rhs(1000, 1, Field::Real);
  SolverConfig cfg;
  cfg.m = 40;
  cfg.k = 0;
  cfg.rtol = 1e-12;
  cfg.max_matvecs = 40 * 50;
  double harm_min = 1e9;
  double ritz_min = 1e9;
  cfg.variant = Variant::Gmres;
  solve_shifted_family(op, b, shifts, cfg, [&](const CycleInfo& info) {
    auto set = harmonic_ritz(*info.fact, 1, Scalar(0.4));
    for (Scalar v : set.values) {
      harm_min = std::min(harm_min, std::abs(v + Scalar(0.4) - Scalar(0.4)));
    }
  });
  cfg.variant = Variant::Fom;
  solve_shifted_family(op, b, shifts, cfg, [&](const CycleInfo& info) {
    for (Scalar v : ritz_values(*info.fact)) {
      ritz_min = std::min(ritz_min, std::abs(v - Scalar(0.4)));
    }
  });
  CHECK(harm_min >= 10.0 * ritz_min);
}

TEST_CASE("deflated restart spans the kept pairs and the residual") {
  const LinearOperator op = bidiagonal_operator(100);
  const Vector b = random_rhs(100, 21, Field::Real);
  KrylovFactorization fact = arnoldi_seed(b, 20);
  extend_arnoldi(op, fact, 20);
  // Residual coefficients from one GMRES solve in small coordinates.
  Vector c = Vector::Zero(21);
  c(0) = b.norm();
  const Matrix w = fact.small_matrix();
  const Vector d = least_squares(w, c).d;
  const Vector s = c - w * d;

  auto set = harmonic_ritz(fact, 5);
  const Index k = static_cast<Index>(set.selection.size());
  // Explicit harmonic vectors in n-space.
  Matrix Y(100, k);
  for (Index j = 0; j < k; ++j) {
    Y.col(j) = fact.V.leftCols(20) * set.vectors.col(set.selection[j]);
  }
  const Vector r0 = fact.basis() * s;

  KrylovFactorization next = deflated_restart(fact, 5, s);
  CHECK(next.size == k);
  CHECK(next.deflation == k);
  CHECK(orthonormality_defect(next) < 1e-12);
  CHECK(recurrence_defect(op, next) < 1e-10);

  // Span check: every harmonic vector and the residual lie in the new
  // V_{k+1} up to defect 1e-10.
  auto basis = next.V.leftCols(k + 1);
  for (Index j = 0; j < k; ++j) {
    const Vector y = Y.col(j);
    const Vector proj = basis * (basis.adjoint() * y);
    CHECK((y - proj).norm() <= 1e-10 * y.norm());
  }
  const Vector proj_r = basis * (basis.adjoint() * r0);
  CHECK((r0 - proj_r).norm() <= 1e-10 * r0.norm());

  // The first k columns span the harmonic vectors alone.
  CHECK(max_principal_angle(next.V.leftCols(k), Y) <= 1e-8);
}

TEST_CASE("deflated restart of exact eigenpairs gives a diagonal block") {
  // Real diagonal matrix, full Krylov space: harmonic pairs are exact, the
  // compressed block must be diagonal with the kept eigenvalues.
  Matrix A = Matrix::Zero(8, 8);
  const double diag[8] = {0.3, 1.1, 2.2, 3.5, 4.1, 5.7, 6.4, 7.9};
  for (Index i = 0; i < 8; ++i) {
    A(i, i) = Scalar(diag[i]);
  }
  const LinearOperator op = dense_operator(A, Field::Real);
  const Vector v0 = Vector::Ones(8);
  KrylovFactorization fact = arnoldi_seed(v0, 8);
  extend_arnoldi(op, fact, 8);
  REQUIRE(fact.size == 8);
  Vector s = Vector::Zero(9);
  s(8) = Scalar(1.0);  // arbitrary direction; pairs already span everything
  KrylovFactorization next = deflated_restart(fact, 3, s);
  REQUIRE(next.size == 3);
  const Matrix block = next.Hbar.topLeftCorner(3, 3);
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 3; ++j) {
      if (i == j) {
        CHECK(std::abs(block(i, i) - Scalar(diag[i])) < 1e-8);
      } else {
        CHECK(std::abs(block(i, j)) < 1e-8);
      }
    }
  }
}

TEST_CASE("conjugate harmonic pairs are kept together") {
  // Real block matrix with eigenvalues 1 +- 2i (modulus ~2.24) and real
  // eigenvalues above and below: a cutoff through the pair must widen.
  Matrix A = Matrix::Zero(6, 6);
  A(0, 0) = Scalar(0.5);
  A(1, 1) = Scalar(1.0);
  A(2, 2) = Scalar(1.0);
  A(2, 3) = Scalar(-2.0);
  A(3, 2) = Scalar(2.0);
  A(3, 3) = Scalar(1.0);
  A(4, 4) = Scalar(4.0);
  A(5, 5) = Scalar(5.0);
  const LinearOperator op = dense_operator(A, Field::Real);
  KrylovFactorization fact = arnoldi_seed(random_rhs(6, 31, Field::Real), 6);
  extend_arnoldi(op, fact, 6);
  REQUIRE(fact.size == 6);
  // Moduli sorted: 0.5, 1.0, 2.24, 2.24, 4, 5. k=3 splits the pair.
  auto set = harmonic_ritz(fact, 3);
  CHECK(set.selection.size() == 4);
  const Scalar a = set.values[2];
  const Scalar b = set.values[3];
  CHECK(std::abs(a - std::conj(b)) < 1e-8 * std::abs(a));
  // k=2 does not touch the pair.
  auto set2 = harmonic_ritz(fact, 2);
  CHECK(set2.selection.size() == 2);
}

TEST_CASE("restart with the residual already inside the pair span") {
  const LinearOperator op = bidiagonal_operator(60);
  const Vector b = random_rhs(60, 23, Field::Real);
  KrylovFactorization fact = arnoldi_seed(b, 12);
  extend_arnoldi(op, fact, 12);
  auto set = harmonic_ritz(fact, 4);
  const Index k = static_cast<Index>(set.selection.size());
  // Residual coefficients proportional to the first harmonic vector.
  Vector s = Vector::Zero(13);
  s.head(12) = set.vectors.col(set.selection[0]);
  KrylovFactorization next = deflated_restart(fact, 4, s);
  REQUIRE(next.size == k);
  CHECK(orthonormality_defect(next) < 1e-12);
  // The kept pairs and the residual direction all project fully onto the
  // new basis.
  auto basis = next.V.leftCols(k + 1);
  const Vector r0 = fact.basis() * s;
  const Vector proj_r = basis * (basis.adjoint() * r0);
  CHECK((r0 - proj_r).norm() <= 1e-10 * r0.norm());
  for (Index j = 0; j < k; ++j) {
    const Vector y = fact.V.leftCols(12) * set.vectors.col(set.selection[j]);
    const Vector proj = basis * (basis.adjoint() * y);
    CHECK((y - proj).norm() <= 1e-10 * y.norm());
  }
}

TEST_CASE("restart guards against invalid sizes") {
  const LinearOperator op = bidiagonal_operator(30);
  KrylovFactorization fact = arnoldi_seed(random_rhs(30, 1, Field::Real), 10);
  extend_arnoldi(op, fact, 10);
  CHECK_THROWS_AS((void)harmonic_ritz(fact, 10), InvalidInputError);
  CHECK_THROWS_AS((void)harmonic_ritz(fact, 0), InvalidInputError);
  CHECK_THROWS_AS(
      (void)deflated_restart(fact, 3, Vector::Zero(5)), InvalidInputError);
}

TEST_SUITE_END();
