/// \file operators.hpp
/// Matrix-free linear operators, shifted application, builtin test
/// matrices, right-hand-side generators, and Matrix Market import.
///
/// Operators are immutable after construction; apply may be called from
/// multiple threads concurrently.

#ifndef KSHIFT_OPERATORS_HPP
#define KSHIFT_OPERATORS_HPP

#include "kshift/types.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace kshift {

struct LinearOperator {
  Index n = 0;
  Field field = Field::Real;
  std::function<void(const Vector&, Vector&)> apply_fn;

  Vector apply(const Vector& v) const {
    if (v.size() != n) {
      throw InvalidInputError("LinearOperator: dimension mismatch, expected " +
                              std::to_string(n) + " got " +
                              std::to_string(v.size()));
    }
    Vector out(n);
    apply_fn(v, out);
    return out;
  }
};

/// Ordered shift list; index 0 is the base shift that drives the Krylov
/// subspace. Duplicates are permitted.
struct ShiftSet {
  std::vector<Scalar> shifts;

  ShiftSet() = default;
  ShiftSet(std::initializer_list<Scalar> s) : shifts(s) {}
  explicit ShiftSet(std::vector<Scalar> s) : shifts(std::move(s)) {}

  Index count() const { return static_cast<Index>(shifts.size()); }
  Scalar base() const { return shifts.at(0); }
  void validate() const {
    if (shifts.empty()) {
      throw InvalidInputError("ShiftSet: shift list is empty");
    }
  }
};

struct RhsFamily {
  std::vector<Vector> vectors;
  std::string kind;  // "random" or "related:<eps>"
  std::uint64_t seed = 0;
};

/// (A - sigma I) v.
Vector apply_shifted(const LinearOperator& op, Scalar sigma, const Vector& v);

/// n x n real matrix with main diagonal (0.1, 1, 2, ..., n-1) and ones on
/// the superdiagonal. The eigenvalues are the diagonal entries.
LinearOperator bidiagonal_operator(Index n);

/// i.i.d. standard-normal entries (real and imaginary parts independent and
/// scaled by 1/sqrt(2) for complex); identical stream for identical seed.
Vector random_rhs(Index n, std::uint64_t seed, Field field);

/// b1 + eps * u with u standard normal drawn from `seed`.
Vector related_rhs(const Vector& b1, double eps, std::uint64_t seed,
                   Field field = Field::Real);

/// Matrix Market coordinate file (real or complex, general symmetry,
/// 1-based indices). Throws ParseError with the offending line number.
LinearOperator load_matrix_market(const std::string& path);

/// Wrap an operator as A - sigma I.
LinearOperator shifted_operator(LinearOperator op, Scalar sigma);

/// Operator backed by an explicit dense matrix.
LinearOperator dense_operator(Matrix A, Field field = Field::Complex);

/// Complex non-normal upper-bidiagonal test matrix: `n_small` eigenvalues of
/// small modulus near the positive real axis, the rest spread over
/// [1,9] x [-3,3] in the right half-plane, with random superdiagonal
/// coupling. Deterministic per seed.
LinearOperator planted_spectrum_operator(Index n, Index n_small,
                                         std::uint64_t seed);

/// Generate nrhs vectors: kind "random" draws vector j from seed + j;
/// kind "related:<eps>" sets b^j = b^1 + eps * u^j with u^j from seed + j.
RhsFamily make_rhs_family(Index n, Index nrhs, const std::string& kind,
                          std::uint64_t seed, Field field);

/// Max over a few random probes of
/// ||A(au+bv) - aAu - bAv|| / (||A||_est * (||u|| + ||v||)).
double linearity_defect(const LinearOperator& op, std::uint64_t seed = 7);

}  // namespace kshift

#endif
