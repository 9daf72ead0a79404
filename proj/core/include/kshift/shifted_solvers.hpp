/// \file shifted_solvers.hpp
/// Multi-shift single-right-hand-side solvers: restarted GMRES-Sh and
/// FOM-Sh, and their deflated-restart forms GMRES-DR(m,k)-Sh and
/// FOM-DR(m,k)-Sh. One matrix-vector-product stream serves all ns shifted
/// systems (A - sigma_i I) x_i = b; their residuals are kept collinear with
/// the base system's across restarts.

#ifndef KSHIFT_SHIFTED_SOLVERS_HPP
#define KSHIFT_SHIFTED_SOLVERS_HPP

#include "kshift/arnoldi.hpp"
#include "kshift/deflation_space.hpp"
#include "kshift/operators.hpp"
#include "kshift/report.hpp"
#include "kshift/types.hpp"

#include <functional>
#include <vector>

namespace kshift {

enum class Variant { Gmres, Fom };

struct SolverConfig {
  Index m = 25;          // subspace size per cycle
  Index k = 0;           // deflation count; 0 means undeflated restarts
  double rtol = 1e-10;   // relative residual tolerance, against ||b||
  long max_matvecs = 100000;
  Variant variant = Variant::Gmres;

  void validate() const {
    if (m < 1 || k < 0 || k >= m) {
      throw InvalidInputError("SolverConfig: need 0 <= k < m, m >= 1");
    }
    if (!(rtol > 0.0)) {
      throw InvalidInputError("SolverConfig: rtol must be positive");
    }
  }
};

/// Per-shift solver state. beta[0] == 1 always; after every cycle the
/// unconverged residuals satisfy r_i = beta_i * r_base up to roundoff (plus
/// a tracked v_{k+1} component during projected multi-rhs solves).
struct ShiftFamilyState {
  std::vector<Vector> xtilde;
  std::vector<Scalar> beta;
  std::vector<bool> converged;
  Vector r_base;                     // bookkeeping residual of the base system
  double rhs_norm = 0.0;
  long matvecs = 0;
  std::vector<double> last_residual;  // latest absolute residual norms
  std::vector<bool> beta_warned;      // growth warning already emitted

  static ShiftFamilyState zero_start(const Vector& b, Index ns);
};

struct CycleInfo {
  Index cycle = 0;
  const KrylovFactorization* fact = nullptr;
  const ShiftFamilyState* state = nullptr;
  const Vector* residual_coeffs = nullptr;  // s, length m+1
};
using CycleObserver = std::function<void(const CycleInfo&)>;

/// Diagnostics captured when a deflation space is built: the selected
/// (base-shifted) harmonic Ritz values and the residual norms
/// ||(A - sigma_1 I) y_j - theta_j y_j|| of the unit-norm pairs.
struct DeflationDiagnostics {
  std::vector<Scalar> values;
  std::vector<double> pair_residuals;
};

struct SolveFamilyResult {
  std::vector<Vector> solutions;
  std::vector<bool> converged;
  bool all_converged = false;
  long matvecs = 0;
  ConvergenceReport report;
  DeflationSpace deflation;  // populated when cfg.k >= 1
  DeflationDiagnostics deflation_diagnostics;
};

/// One multi-shift GMRES cycle over a built factorization. Updates the
/// approximate solutions, collinearity factors, last_residual (by the
/// shortcut formula ||beta_i c - (Hbar - sigma_i Ibar) d_i||) and the
/// bookkeeping base residual. Returns the base residual coefficient vector
/// s = c - (Hbar - sigma_1 Ibar) d_1 needed by the deflated restart.
Vector gmres_sh_cycle(const LinearOperator& op, const ShiftSet& shifts,
                      ShiftFamilyState& state,
                      const KrylovFactorization& fact,
                      ConvergenceReport* report = nullptr);

/// One multi-shift FOM cycle: Galerkin solves (H_m - sigma_i I) d_i =
/// beta_i c_{1:m} for every shift; residuals end up collinear along
/// v_{m+1} automatically.
Vector fom_sh_cycle(const LinearOperator& op, const ShiftSet& shifts,
                    ShiftFamilyState& state, const KrylovFactorization& fact,
                    ConvergenceReport* report = nullptr);

/// Restarted multi-shift driver; cfg.k = 0 gives plain GMRES(m)-Sh /
/// FOM(m)-Sh, cfg.k >= 1 the deflated-restart variants. `rhs_index` tags
/// report rows. An initial guess is accepted only for a single-shift
/// family (residual collinearity across shifts cannot survive a guess);
/// all systems start from zero otherwise.
SolveFamilyResult solve_shifted_family(const LinearOperator& op,
                                       const Vector& b, const ShiftSet& shifts,
                                       const SolverConfig& cfg,
                                       const CycleObserver& observer = {},
                                       int rhs_index = 1,
                                       const Vector* initial_guess = nullptr);

/// GMRES-DR(m,k)-Sh; requires cfg.k >= 1. Returns the final deflation
/// space (V_{k+1}, Hbar_k) for reuse by later right-hand sides.
SolveFamilyResult gmres_dr_sh(const LinearOperator& op, const Vector& b,
                              const ShiftSet& shifts, const SolverConfig& cfg,
                              const CycleObserver& observer = {});

/// FOM-DR(m,k)-Sh: Galerkin reduced solves with regular-Ritz deflation.
SolveFamilyResult fom_dr_sh(const LinearOperator& op, const Vector& b,
                            const ShiftSet& shifts, const SolverConfig& cfg,
                            const CycleObserver& observer = {});

}  // namespace kshift

#endif
