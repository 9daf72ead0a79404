/// \file multi_rhs.hpp
/// Deflated solution of second and subsequent right-hand sides with
/// shifts: the minres projection over the frozen deflation space, the
/// parallel-except-v_{k+1} shifted projection, GMRES(m)-Proj(k)-Sh, the
/// extra-right-hand-side solve with its rank-one correction, and the
/// related-right-hand-sides projection.

#ifndef KSHIFT_MULTI_RHS_HPP
#define KSHIFT_MULTI_RHS_HPP

#include "kshift/deflation_space.hpp"
#include "kshift/operators.hpp"
#include "kshift/report.hpp"
#include "kshift/shifted_solvers.hpp"
#include "kshift/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace kshift {

/// Shifted solutions of (A - sigma_i I) s_i = v_{k+1}, used to strip the
/// accumulated v_{k+1} residual component from later right-hand sides.
struct ExtraRhsSolutions {
  std::vector<Vector> s;
  std::vector<double> residual_level;  // ||v_{k+1} - (A - sigma_i I) s_i||
  long matvecs = 0;
  bool empty() const { return s.empty(); }
};

/// Minimum-residual correction of (x0, r0) over the first `active_k`
/// columns of the deflation space for the system shifted by sigma:
/// x = x0 + V_k d, r = r0 - V_{k+1} (Hbar_k - sigma Ibar) d. Costs 3k+2
/// length-n vector operations and no operator applications.
/// active_k < 0 uses the whole space.
std::pair<Vector, Vector> minres_project(const DeflationSpace& defl,
                                         const Vector& x0, const Vector& r0,
                                         Scalar sigma = Scalar(0.0),
                                         Index active_k = -1);

/// One projection sweep over the family: the base system gets the minres
/// projection; each other system solves the k x k Galerkin block
/// (H_k - sigma_i I) d_i = beta_i (H_k - sigma_1 I) d_1 so its residual
/// becomes beta_i r_1 + gamma_i v_{k+1}. The beta_i do not change.
void shifted_project(const DeflationSpace& defl, const ShiftSet& shifts,
                     ShiftFamilyState& state, Index active_k = -1);

struct ProjConfig {
  Index m = 15;        // GMRES cycle size
  Index k = -1;        // projection count; -1 means the full space
  double rtol = 1e-10;
  long max_matvecs = 100000;

  void validate() const {
    if (m < 1) {
      throw InvalidInputError("ProjConfig: m must be positive");
    }
    if (!(rtol > 0.0)) {
      throw InvalidInputError("ProjConfig: rtol must be positive");
    }
  }
};

struct ProjSolveOptions {
  bool correct = true;         // run the final v_{k+1} correction
  bool trace_explicit = false; // per-cycle explicit residual rows in the
                               // report (uncorrected and corrected-now)
  int rhs_index = 2;
};

/// Alternate shifted_project with one cycle of GMRES(m)-Sh until the
/// residuals (ignoring the v_{k+1} component for non-base systems) meet
/// rtol, then apply the rank-one correction x_i += (v_{k+1}^H r_i) s_i and
/// report explicit corrected residuals. `warm` supplies initial solutions
/// with a shared residual (from related_rhs_project).
SolveFamilyResult gmres_proj_sh(const LinearOperator& op, const Vector& b_j,
                                const ShiftSet& shifts,
                                const DeflationSpace& defl,
                                const ExtraRhsSolutions& extra,
                                const ProjConfig& cfg,
                                const ProjSolveOptions& opts = {},
                                const CycleObserver& observer = {},
                                const ShiftFamilyState* warm = nullptr);

/// Solve (A - sigma_i I) s_i = v_{k+1} for every shift with the same
/// projected machinery, then correct s_i = s_tilde_i / (1 - gamma_i) with
/// gamma_i = v_{k+1}^H r. Throws DegenerateCorrectionError when
/// |1 - gamma_i| < 1e-12 (no progress was made on that system).
ExtraRhsSolutions solve_extra_rhs(const LinearOperator& op,
                                  const ShiftSet& shifts,
                                  const DeflationSpace& defl,
                                  double extra_rtol, const ProjConfig& cfg,
                                  ConvergenceReport* report = nullptr);

/// x_tilde + (v_last^H r) s.
Vector correct_solution(const Vector& xtilde, const Vector& r,
                        const Vector& s, const Vector& v_last);

struct RelatedProjection {
  std::vector<Vector> x;  // per shift
  Vector r;               // one residual, shared by every shift
  Vector d;
  Index used_cols = 0;
  std::vector<std::string> warnings;
};

/// Project b_j over the previous solutions: solve the shift-independent
/// Gram system (B^H B) d = B^H b_j, set x_i = X_i d and r = b_j - B d.
/// Trailing columns are dropped (with a warning) if the Gram matrix is
/// singular to tolerance.
RelatedProjection related_rhs_project(const std::vector<Matrix>& X,
                                      const Matrix& B, const Vector& b_j);

/// Initial solver state carrying a related-projection result.
ShiftFamilyState warm_state_from(const RelatedProjection& proj);

}  // namespace kshift

#endif
