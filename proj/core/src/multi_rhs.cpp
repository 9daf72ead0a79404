#include "kshift/multi_rhs.hpp"

#include "kshift/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kshift {

namespace {

Index clamp_active(const DeflationSpace& defl, Index active_k) {
  const Index k = defl.k();
  return (active_k < 0) ? k : std::min(active_k, k);
}

// (Hbar_k - sigma Ibar) truncated to its first kp columns.
Matrix shifted_block(const DeflationSpace& defl, Scalar sigma, Index kp) {
  Matrix w = defl.Hbar_k.leftCols(kp);
  for (Index j = 0; j < kp; ++j) {
    w(j, j) -= sigma;
  }
  return w;
}

struct MinresStep {
  Vector d;
  Vector x;
  Vector r;
};

MinresStep minres_step(const DeflationSpace& defl, const Vector& x0,
                       const Vector& r0, Scalar sigma, Index kp) {
  MinresStep out;
  if (kp == 0) {
    out.d = Vector();
    out.x = x0;
    out.r = r0;
    return out;
  }
  const Matrix w = shifted_block(defl, sigma, kp);
  const Vector c = defl.Vk1.adjoint() * r0;
  out.d = least_squares(w, c).d;
  out.x = x0 + defl.Vk1.leftCols(kp) * out.d;
  out.r = r0 - defl.Vk1 * (w * out.d);
  return out;
}

}  // namespace

std::pair<Vector, Vector> minres_project(const DeflationSpace& defl,
                                         const Vector& x0, const Vector& r0,
                                         Scalar sigma, Index active_k) {
  MinresStep step = minres_step(defl, x0, r0, sigma, clamp_active(defl,
                                                                  active_k));
  return {std::move(step.x), std::move(step.r)};
}

void shifted_project(const DeflationSpace& defl, const ShiftSet& shifts,
                     ShiftFamilyState& state, Index active_k) {
  shifts.validate();
  const Index kp = clamp_active(defl, active_k);
  if (kp == 0) {
    return;
  }
  const Index ns = shifts.count();
  const Scalar sigma1 = shifts.base();

  MinresStep base = minres_step(defl, state.xtilde[0], state.r_base, sigma1,
                                kp);
  state.xtilde[0] = std::move(base.x);
  state.r_base = std::move(base.r);
  state.last_residual[0] = state.r_base.norm();

  if (ns == 1) {
    return;
  }
  const Vector t_unit = shifted_block(defl, sigma1, kp) * base.d;
  for (Index i = 1; i < ns; ++i) {
    if (state.converged[i]) {
      continue;
    }
    const Vector t = state.beta[i] * t_unit;
    Matrix hsq = defl.Hbar_k.topLeftCorner(kp, kp);
    hsq.diagonal().array() -= shifts.shifts[i];
    Vector d;
    try {
      d = solve_square(hsq, t.head(kp));
    } catch (const SingularityError& e) {
      throw SingularityError("shifted_project: shift " + std::to_string(i + 1) +
                             " singular on the deflation space (" + e.what() +
                             ")");
    }
    state.xtilde[i].noalias() += defl.Vk1.leftCols(kp) * d;
    // Residual is now beta_i r_base + gamma_i v_{k+1}; beta_i unchanged.
    state.last_residual[i] = std::abs(state.beta[i]) * state.last_residual[0];
  }
}

Vector correct_solution(const Vector& xtilde, const Vector& r, const Vector& s,
                        const Vector& v_last) {
  const Scalar gamma = v_last.dot(r);  // v_last^H r
  return xtilde + gamma * s;
}

SolveFamilyResult gmres_proj_sh(const LinearOperator& op, const Vector& b_j,
                                const ShiftSet& shifts,
                                const DeflationSpace& defl,
                                const ExtraRhsSolutions& extra,
                                const ProjConfig& cfg,
                                const ProjSolveOptions& opts,
                                const CycleObserver& observer,
                                const ShiftFamilyState* warm) {
  shifts.validate();
  cfg.validate();
  if (b_j.size() != op.n) {
    throw InvalidInputError("gmres_proj_sh: rhs length mismatch");
  }
  if (!(b_j.norm() > 0.0)) {
    throw InvalidInputError("gmres_proj_sh: rhs must be nonzero");
  }
  const Index ns = shifts.count();
  const Index kp = clamp_active(defl, cfg.k);
  const int rhs = opts.rhs_index;

  ShiftFamilyState state =
      warm ? *warm : ShiftFamilyState::zero_start(b_j, ns);
  state.rhs_norm = b_j.norm();
  state.matvecs = 0;
  const double bnorm = state.rhs_norm;

  SolveFamilyResult res;
  for (Index i = 0; i < ns; ++i) {
    res.report.add(rhs, static_cast<int>(i + 1), 0,
                   std::abs(state.beta[i]) * state.r_base.norm() / bnorm);
  }

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

    if (kp > 0) {
      shifted_project(defl, shifts, state, kp);
      if (!opts.trace_explicit) {
        for (Index i = 0; i < ns; ++i) {
          if (!state.converged[i]) {
            res.report.add(rhs, static_cast<int>(i + 1), state.matvecs,
                           state.last_residual[i] / bnorm);
          }
        }
      }
    }

    KrylovFactorization fact = arnoldi_seed(state.r_base, cfg.m, 0);
    extend_arnoldi(op, fact, cfg.m, &state.matvecs);
    const Vector s = gmres_sh_cycle(op, shifts, state, fact, &res.report);

    for (Index i = 0; i < ns; ++i) {
      if (state.converged[i]) {
        continue;
      }
      const double relres = state.last_residual[i] / bnorm;
      if (!opts.trace_explicit) {
        res.report.add(rhs, static_cast<int>(i + 1), state.matvecs, relres);
      }
      if (relres <= cfg.rtol) {
        state.converged[i] = true;
      }
    }

    if (opts.trace_explicit) {
      // Diagnostic rows carry explicit residuals (and corrected-now values
      // when the extra solutions are available); these applications are not
      // part of the algorithm and are left out of the matvec tally.
      for (Index i = 0; i < ns; ++i) {
        const Vector ri =
            b_j - apply_shifted(op, shifts.shifts[i], state.xtilde[i]);
        res.report.add(rhs, static_cast<int>(i + 1), state.matvecs,
                       ri.norm() / bnorm, 0);
        if (i > 0 && !extra.empty()) {
          const Vector xc =
              correct_solution(state.xtilde[i], ri, extra.s[i],
                               defl.v_last());
          const Vector rc =
              b_j - apply_shifted(op, shifts.shifts[i], xc);
          res.report.add(rhs, static_cast<int>(i + 1), state.matvecs,
                         rc.norm() / bnorm, 1);
        }
      }
    }

    if (observer) {
      observer(CycleInfo{cycle, &fact, &state, &s});
    }
    if (fact.breakdown) {
      break;
    }
  }

  // Correction phase: one Galerkin update along s_i removes the v_{k+1}
  // component accumulated by the non-base systems.
  if (opts.correct && kp > 0 && !extra.empty()) {
    for (Index i = 1; i < ns; ++i) {
      Vector ri = b_j - apply_shifted(op, shifts.shifts[i], state.xtilde[i]);
      ++state.matvecs;
      res.report.add(rhs, static_cast<int>(i + 1), state.matvecs,
                     ri.norm() / bnorm, 0);
      state.xtilde[i] =
          correct_solution(state.xtilde[i], ri, extra.s[i], defl.v_last());
      Vector rc = b_j - apply_shifted(op, shifts.shifts[i], state.xtilde[i]);
      ++state.matvecs;
      const double relres = rc.norm() / bnorm;
      res.report.add(rhs, static_cast<int>(i + 1), state.matvecs, relres, 1);
      state.converged[i] = relres <= cfg.rtol;
    }
  }

  res.solutions = state.xtilde;
  res.converged = state.converged;
  res.all_converged = std::all_of(state.converged.begin(),
                                  state.converged.end(),
                                  [](bool c) { return c; });
  res.matvecs = state.matvecs;
  return res;
}

ExtraRhsSolutions solve_extra_rhs(const LinearOperator& op,
                                  const ShiftSet& shifts,
                                  const DeflationSpace& defl,
                                  double extra_rtol, const ProjConfig& cfg,
                                  ConvergenceReport* report) {
  if (defl.empty()) {
    throw InvalidInputError("solve_extra_rhs: deflation space is empty");
  }
  if (!(extra_rtol > 0.0)) {
    throw InvalidInputError("solve_extra_rhs: extra_rtol must be positive");
  }
  const Vector v = defl.v_last();
  ProjConfig ecfg = cfg;
  ecfg.rtol = extra_rtol;
  ProjSolveOptions opts;
  opts.correct = false;
  opts.rhs_index = 0;

  SolveFamilyResult run =
      gmres_proj_sh(op, v, shifts, defl, ExtraRhsSolutions{}, ecfg, opts);
  const Index ns = shifts.count();

  ExtraRhsSolutions out;
  out.s.resize(ns);
  out.residual_level.resize(ns);
  long mv = run.matvecs;
  for (Index i = 0; i < ns; ++i) {
    Vector r = v - apply_shifted(op, shifts.shifts[i], run.solutions[i]);
    ++mv;
    const Scalar gamma = v.dot(r);  // v_{k+1}^H r
    if (std::abs(Scalar(1.0) - gamma) < 1e-12) {
      throw DegenerateCorrectionError(
          "solve_extra_rhs: shift " + std::to_string(i + 1) +
          ": 1 - gamma vanishes; no progress was made on the extra system");
    }
    out.s[i] = run.solutions[i] / (Scalar(1.0) - gamma);
    out.residual_level[i] =
        (v - apply_shifted(op, shifts.shifts[i], out.s[i])).norm();
    ++mv;
    // v_{k+1} has unit norm, so the level is already relative.
    run.report.add(0, static_cast<int>(i + 1), mv, out.residual_level[i], 1);
  }
  out.matvecs = mv;
  if (report) {
    report->append(run.report);
  }
  return out;
}

RelatedProjection related_rhs_project(const std::vector<Matrix>& X,
                                      const Matrix& B, const Vector& b_j) {
  const Index cols = B.cols();
  const Index n = B.rows();
  if (cols < 1) {
    throw InvalidInputError("related_rhs_project: no prior right-hand sides");
  }
  if (b_j.size() != n) {
    throw InvalidInputError("related_rhs_project: rhs length mismatch");
  }
  for (const Matrix& xi : X) {
    if (xi.rows() != n || xi.cols() != cols) {
      throw InvalidInputError(
          "related_rhs_project: solution stack shape mismatch");
    }
  }

  RelatedProjection out;
  const Matrix gram = B.adjoint() * B;
  const Vector rhs = B.adjoint() * b_j;
  Index used = cols;
  while (used > 0) {
    try {
      out.d = solve_square(gram.topLeftCorner(used, used), rhs.head(used));
      break;
    } catch (const SingularityError&) {
      out.warnings.push_back(
          "related_rhs_project: Gram matrix singular with " +
          std::to_string(used) + " columns; dropping the trailing one");
      --used;
    }
  }
  out.used_cols = used;
  if (used == 0) {
    out.d = Vector();
    out.r = b_j;
    for (const Matrix& xi : X) {
      (void)xi;
      out.x.push_back(Vector::Zero(n));
    }
    return out;
  }
  out.r = b_j - B.leftCols(used) * out.d;
  out.x.reserve(X.size());
  for (const Matrix& xi : X) {
    out.x.push_back(xi.leftCols(used) * out.d);
  }
  return out;
}

ShiftFamilyState warm_state_from(const RelatedProjection& proj) {
  const Index ns = static_cast<Index>(proj.x.size());
  ShiftFamilyState state;
  state.xtilde = proj.x;
  state.beta.assign(ns, Scalar(1.0));
  state.converged.assign(ns, false);
  state.r_base = proj.r;
  state.rhs_norm = proj.r.norm();
  state.last_residual.assign(ns, proj.r.norm());
  return state;
}

}  // namespace kshift
