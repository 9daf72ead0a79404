#include "kshift/shifted_solvers.hpp"

#include "kshift/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kshift {

namespace {

std::string shift_label(const ShiftSet& shifts, Index i) {
  const Scalar s = shifts.shifts[i];
  std::string text = "shift " + std::to_string(i + 1) + " (sigma = " +
                     std::to_string(s.real());
  if (s.imag() != 0.0) {
    text += (s.imag() < 0 ? " - " : " + ") +
            std::to_string(std::abs(s.imag())) + "i";
  }
  return text + ")";
}

// Hbar_m - sigma * Ibar, the shifted (m+1) x m reduced matrix.
Matrix shifted_small(const KrylovFactorization& fact, Scalar sigma) {
  Matrix W = fact.small_matrix();
  W.diagonal().array() -= sigma;
  return W;
}

void warn_beta_growth(ConvergenceReport* report, ShiftFamilyState& state,
                      const ShiftSet& shifts, Index i, Scalar beta_old,
                      Scalar beta_new) {
  if (!report) {
    return;
  }
  const double old_mag = std::abs(beta_old);
  if (old_mag > 0.0 && std::abs(beta_new) > 10.0 * old_mag) {
    if (state.beta_warned.empty()) {
      state.beta_warned.assign(shifts.count(), false);
    }
    if (!state.beta_warned[i]) {
      state.beta_warned[i] = true;
      report->warnings.push_back(
          shift_label(shifts, i) + ": residual scale grew " +
          std::to_string(std::abs(beta_new) / old_mag) +
          "x in one cycle; the base shift may not be the slowest system");
    }
  }
}

}  // namespace

ShiftFamilyState ShiftFamilyState::zero_start(const Vector& b, Index ns) {
  ShiftFamilyState state;
  state.xtilde.assign(ns, Vector::Zero(b.size()));
  state.beta.assign(ns, Scalar(1.0));
  state.converged.assign(ns, false);
  state.r_base = b;
  state.rhs_norm = b.norm();
  state.last_residual.assign(ns, b.norm());
  return state;
}

Vector gmres_sh_cycle(const LinearOperator& op, const ShiftSet& shifts,
                      ShiftFamilyState& state,
                      const KrylovFactorization& fact,
                      ConvergenceReport* report) {
  (void)op;
  const Index m = fact.size;
  const Index ns = shifts.count();
  auto basis = fact.basis();
  auto vm = fact.V.leftCols(m);
  const Vector c = basis.adjoint() * state.r_base;

  const Matrix w_base = shifted_small(fact, shifts.base());
  LeastSquaresResult base;
  try {
    base = least_squares(w_base, c);
  } catch (const SingularityError& e) {
    throw SingularityError("gmres_sh_cycle: " + shift_label(shifts, 0) +
                           " matches a harmonic Ritz value of this cycle (" +
                           e.what() + ")");
  }
  Vector s = c - w_base * base.d;
  state.xtilde[0].noalias() += vm * base.d;
  state.last_residual[0] = base.resnorm;

  if (fact.breakdown) {
    // Invariant subspace: every shifted system is solvable exactly over it.
    for (Index i = 1; i < ns; ++i) {
      if (state.converged[i]) {
        continue;
      }
      const Matrix wi = shifted_small(fact, shifts.shifts[i]);
      LeastSquaresResult lsq;
      try {
        lsq = least_squares(wi, Vector(state.beta[i] * c));
      } catch (const SingularityError& e) {
        throw SingularityError("gmres_sh_cycle: " + shift_label(shifts, i) +
                               " singular on the invariant subspace (" +
                               e.what() + ")");
      }
      state.xtilde[i].noalias() += vm * lsq.d;
      state.last_residual[i] = lsq.resnorm;
    }
    state.r_base = basis * s;
    return s;
  }

  for (Index i = 1; i < ns; ++i) {
    if (state.converged[i]) {
      continue;
    }
    const Scalar beta = state.beta[i];
    const Matrix wi = shifted_small(fact, shifts.shifts[i]);
    const QRFactors qr = qr_factor(wi);
    const double wscale = wi.norm();
    for (Index j = 0; j < m; ++j) {
      if (std::abs(qr.R(j, j)) < 1e-14 * wscale) {
        throw SingularityError("gmres_sh_cycle: " + shift_label(shifts, i) +
                               " matches a harmonic Ritz value of this cycle");
      }
    }
    const Vector qc = qr.Q.adjoint() * c;
    const Vector qs = qr.Q.adjoint() * s;
    Scalar beta_new(0.0);
    if (beta != Scalar(0.0)) {
      const Scalar denom = qs(m);
      if (std::abs(denom) < 1e-14 * s.norm()) {
        throw SingularityError("gmres_sh_cycle: " + shift_label(shifts, i) +
                               ": base residual lies in the shifted range; "
                               "collinearity factor undefined");
      }
      beta_new = beta * qc(m) / denom;
    }
    const Vector rhs = beta * qc.head(m) - beta_new * qs.head(m);
    const Vector d = qr.R.topLeftCorner(m, m)
                         .template triangularView<Eigen::Upper>()
                         .solve(rhs);
    state.xtilde[i].noalias() += vm * d;
    // Shortcut residual norm ||beta_i c - (Hbar - sigma_i Ibar) d_i||.
    state.last_residual[i] = (beta * c - wi * d).norm();
    warn_beta_growth(report, state, shifts, i, beta, beta_new);
    state.beta[i] = beta_new;
  }

  state.r_base = basis * s;
  return s;
}

Vector fom_sh_cycle(const LinearOperator& op, const ShiftSet& shifts,
                    ShiftFamilyState& state, const KrylovFactorization& fact,
                    ConvergenceReport* report) {
  (void)op;
  const Index m = fact.size;
  const Index ns = shifts.count();
  auto basis = fact.basis();
  auto vm = fact.V.leftCols(m);
  const Vector c = basis.adjoint() * state.r_base;
  const Scalar h = fact.subdiag();

  std::vector<Scalar> zeta(ns, Scalar(0.0));
  for (Index i = 0; i < ns; ++i) {
    if (i > 0 && state.converged[i]) {
      continue;
    }
    Matrix hs = fact.square_block();
    hs.diagonal().array() -= shifts.shifts[i];
    Vector d;
    try {
      d = solve_square(hs, Vector(state.beta[i] * c.head(m)));
    } catch (const SingularityError& e) {
      throw SingularityError("fom_sh_cycle: " + shift_label(shifts, i) +
                             " matches a Ritz value of this cycle (" +
                             e.what() + ")");
    }
    state.xtilde[i].noalias() += vm * d;
    zeta[i] = state.beta[i] * c(m) - h * d(m - 1);
    state.last_residual[i] = std::abs(zeta[i]);
  }

  // The new residuals are zeta_i v_{m+1}: collinear by construction.
  for (Index i = 1; i < ns; ++i) {
    if (state.converged[i]) {
      continue;
    }
    Scalar beta_new(0.0);
    if (std::abs(zeta[0]) > 0.0) {
      beta_new = zeta[i] / zeta[0];
    }
    warn_beta_growth(report, state, shifts, i, state.beta[i], beta_new);
    state.beta[i] = beta_new;
  }

  Vector s = Vector::Zero(m + 1);
  s(m) = zeta[0];
  state.r_base = basis * s;
  return s;
}

namespace {

DeflationDiagnostics pair_diagnostics(const KrylovFactorization& fact,
                                      Index k, Scalar base_shift,
                                      DeflationKind kind) {
  DeflationDiagnostics diag;
  HarmonicRitzSet set = (kind == DeflationKind::Harmonic)
                            ? harmonic_ritz(fact, k, base_shift)
                            : ritz_pairs(fact, k, base_shift);
  const Matrix w = [&] {
    Matrix t = fact.small_matrix();
    t.diagonal().array() -= base_shift;
    return t;
  }();
  for (Index idx : set.selection) {
    const Scalar theta = set.values[idx];
    const Vector g = set.vectors.col(idx);
    Vector resid = w * g;
    resid.head(fact.size) -= theta * g;
    diag.values.push_back(theta);
    diag.pair_residuals.push_back(resid.norm());
  }
  return diag;
}

}  // namespace

SolveFamilyResult solve_shifted_family(const LinearOperator& op,
                                       const Vector& b, const ShiftSet& shifts,
                                       const SolverConfig& cfg,
                                       const CycleObserver& observer,
                                       int rhs_index,
                                       const Vector* initial_guess) {
  shifts.validate();
  cfg.validate();
  if (b.size() != op.n) {
    throw InvalidInputError("solve_shifted_family: rhs length mismatch");
  }
  if (!(b.norm() > 0.0)) {
    throw InvalidInputError("solve_shifted_family: rhs must be nonzero");
  }
  const Index ns = shifts.count();
  const DeflationKind kind = (cfg.variant == Variant::Gmres)
                                 ? DeflationKind::Harmonic
                                 : DeflationKind::Ritz;

  ShiftFamilyState state = ShiftFamilyState::zero_start(b, ns);
  if (initial_guess) {
    if (ns > 1) {
      throw InvalidInputError(
          "solve_shifted_family: an initial guess breaks residual "
          "collinearity; supported for a single shift only");
    }
    if (initial_guess->size() != op.n) {
      throw InvalidInputError("solve_shifted_family: guess length mismatch");
    }
    state.xtilde[0] = *initial_guess;
    state.r_base = b - apply_shifted(op, shifts.base(), *initial_guess);
    ++state.matvecs;
    state.last_residual[0] = state.r_base.norm();
  }
  SolveFamilyResult res;
  for (Index i = 0; i < ns; ++i) {
    const double relres = state.last_residual[i] / state.rhs_norm;
    res.report.add(rhs_index, static_cast<int>(i + 1), state.matvecs, relres);
    if (relres <= cfg.rtol) {
      state.converged[i] = true;
    }
  }

  KrylovFactorization fact;
  Vector s;
  bool have_fact = false;
  Index cycle = 0;

  while (state.matvecs < cfg.max_matvecs) {
    if (std::all_of(state.converged.begin(), state.converged.end(),
                    [](bool c) { return c; })) {
      break;
    }
    if (!(state.r_base.norm() > 0.0)) {
      state.converged[0] = true;
      break;
    }
    ++cycle;
    if (!have_fact || cfg.k == 0) {
      fact = arnoldi_seed(state.r_base, cfg.m, 0);
    } else {
      try {
        fact = deflated_restart(fact, cfg.k, s, shifts.base(), kind);
      } catch (const DeflationFailureError& e) {
        res.report.warnings.push_back("cycle " + std::to_string(cycle) + ": " +
                                      e.what() +
                                      "; restarting with regular Ritz pairs");
        fact = deflated_restart(fact, cfg.k, s, shifts.base(),
                                DeflationKind::Ritz);
      }
    }
    extend_arnoldi(op, fact, cfg.m, &state.matvecs);
    have_fact = true;

    s = (cfg.variant == Variant::Gmres)
            ? gmres_sh_cycle(op, shifts, state, fact, &res.report)
            : fom_sh_cycle(op, shifts, state, fact, &res.report);

    for (Index i = 0; i < ns; ++i) {
      if (state.converged[i]) {
        continue;
      }
      const double relres = state.last_residual[i] / state.rhs_norm;
      res.report.add(rhs_index, static_cast<int>(i + 1), state.matvecs,
                     relres);
      if (relres <= cfg.rtol) {
        state.converged[i] = true;
      }
    }
    if (observer) {
      observer(CycleInfo{cycle, &fact, &state, &s});
    }
    if (fact.breakdown) {
      // Exact solutions were formed this cycle; restarting from a zero
      // residual is meaningless.
      break;
    }
  }

  res.solutions = state.xtilde;
  res.converged = state.converged;
  res.all_converged = std::all_of(state.converged.begin(),
                                  state.converged.end(),
                                  [](bool c) { return c; });
  res.matvecs = state.matvecs;

  if (cfg.k >= 1 && have_fact && fact.size > cfg.k && !fact.breakdown) {
    try {
      KrylovFactorization frozen =
          deflated_restart(fact, cfg.k, s, shifts.base(), kind);
      res.deflation.Vk1 = frozen.V.leftCols(frozen.size + 1);
      res.deflation.Hbar_k = frozen.Hbar.topLeftCorner(frozen.size + 1,
                                                       frozen.size);
      res.deflation_diagnostics =
          pair_diagnostics(fact, cfg.k, shifts.base(), kind);
    } catch (const DeflationFailureError& e) {
      res.report.warnings.push_back(
          std::string("deflation space unavailable: ") + e.what());
    }
  }
  return res;
}

SolveFamilyResult gmres_dr_sh(const LinearOperator& op, const Vector& b,
                              const ShiftSet& shifts, const SolverConfig& cfg,
                              const CycleObserver& observer) {
  if (cfg.k < 1) {
    throw InvalidInputError("gmres_dr_sh: deflation count k must be >= 1");
  }
  SolverConfig c = cfg;
  c.variant = Variant::Gmres;
  return solve_shifted_family(op, b, shifts, c, observer);
}

SolveFamilyResult fom_dr_sh(const LinearOperator& op, const Vector& b,
                            const ShiftSet& shifts, const SolverConfig& cfg,
                            const CycleObserver& observer) {
  if (cfg.k < 1) {
    throw InvalidInputError("fom_dr_sh: deflation count k must be >= 1");
  }
  SolverConfig c = cfg;
  c.variant = Variant::Fom;
  return solve_shifted_family(op, b, shifts, c, observer);
}

}  // namespace kshift
