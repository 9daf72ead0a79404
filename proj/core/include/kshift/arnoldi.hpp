/// \file arnoldi.hpp
/// Arnoldi factorizations A V_m = V_{m+1} Hbar_m, harmonic and regular Ritz
/// extraction, and the deflated restart that compresses a full cycle into
/// the next cycle's augmented basis.

#ifndef KSHIFT_ARNOLDI_HPP
#define KSHIFT_ARNOLDI_HPP

#include "kshift/operators.hpp"
#include "kshift/types.hpp"

#include <vector>

namespace kshift {

/// The pair (V_{m+1}, Hbar_m) with A V_m = V_{m+1} Hbar_m. Hbar is
/// upper-Hessenberg below its leading (k+1) x k block, which is full after
/// a deflated restart (k = `deflation`). Storage is allocated once at
/// `max_size`; `size` tracks the filled columns.
struct KrylovFactorization {
  Matrix V;      // n x (max_size + 1); columns 0..size are valid
  Matrix Hbar;   // (max_size + 1) x max_size; top-left (size+1) x size valid
  Index size = 0;
  Index deflation = 0;
  Index max_size = 0;
  bool breakdown = false;

  Index n() const { return V.rows(); }
  auto basis() const { return V.leftCols(size + 1); }
  auto small_matrix() const { return Hbar.topLeftCorner(size + 1, size); }
  auto square_block() const { return Hbar.topLeftCorner(size, size); }
  /// Subdiagonal entry h_{m+1,m}; real and nonnegative by construction for
  /// Arnoldi-generated columns.
  Scalar subdiag() const { return Hbar(size, size - 1); }
};

/// Fresh factorization of capacity m_max seeded with v0 (normalized).
KrylovFactorization arnoldi_seed(const Vector& v0, Index m_max,
                                 Index deflation = 0);

/// Grow the factorization to `target_m` columns with classical
/// Gram-Schmidt plus one full reorthogonalization pass (CGS2). On
/// breakdown (new column norm below 1e-14 of its pre-orthogonalization
/// size) the factorization is marked `breakdown` at the achieved size and
/// the exact solution is representable in the current basis. Each new
/// column costs one operator application, tallied into *matvecs.
void extend_arnoldi(const LinearOperator& op, KrylovFactorization& fact,
                    Index target_m, long* matvecs = nullptr);

/// Eigenvalues of the leading m x m block, ascending modulus.
std::vector<Scalar> ritz_values(const KrylovFactorization& fact);

/// Ritz or harmonic Ritz data in the m-dimensional coordinate space.
/// `values` are sorted by ascending modulus; column j of `vectors` is the
/// unit coefficient vector of values[j]. `selection` lists the kept
/// indices: the k smallest in modulus, grown by one when a complex
/// conjugate pair straddles the cutoff.
struct HarmonicRitzSet {
  std::vector<Scalar> values;
  Matrix vectors;
  std::vector<Index> selection;
};

/// Harmonic Ritz pairs of (H_m - shift I): solves
/// (H + h^2 H^{-H} e_m e_m^H) g = theta g with h the subdiagonal entry.
/// Throws DeflationFailureError when H - shift I is singular to tolerance;
/// callers may fall back to regular Ritz pairs.
HarmonicRitzSet harmonic_ritz(const KrylovFactorization& fact, Index k,
                              Scalar shift = Scalar(0.0));

/// Regular Ritz pairs of (H_m - shift I), same container and selection
/// rules as harmonic_ritz.
HarmonicRitzSet ritz_pairs(const KrylovFactorization& fact, Index k,
                           Scalar shift = Scalar(0.0));

enum class DeflationKind { Harmonic, Ritz };

/// Compress a full factorization into a size-k one whose first k columns
/// span the selected (harmonic) Ritz vectors and whose k+1 column span
/// contains the residual V_{m+1} * residual_coeffs. The pairs are taken
/// from the base-shifted problem. The returned deflation count may exceed
/// k by one (conjugate pair) or be smaller (dependent coefficient
/// vectors); read it back from the result.
KrylovFactorization deflated_restart(const KrylovFactorization& fact, Index k,
                                     const Vector& residual_coeffs,
                                     Scalar base_shift = Scalar(0.0),
                                     DeflationKind kind =
                                         DeflationKind::Harmonic);

/// ||V^H V - I||_F over the valid columns.
double orthonormality_defect(const KrylovFactorization& fact);

/// ||A V_m - V Hbar||_F / ||Hbar||_F, by explicit application.
double recurrence_defect(const LinearOperator& op,
                         const KrylovFactorization& fact);

}  // namespace kshift

#endif
