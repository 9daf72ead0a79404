#include "kshift/arnoldi.hpp"

#include "kshift/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kshift {

namespace {

constexpr double kBreakdownTol = 1e-14;

// Sort eigenpairs by ascending modulus and mark the first k as selected,
// keeping complex conjugate partners together when one straddles the cut.
HarmonicRitzSet sort_and_select(std::vector<EigenPair> pairs, Index k) {
  const Index m = static_cast<Index>(pairs.size());
  std::vector<Index> order(m);
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(pairs[a].value) < std::abs(pairs[b].value);
  });

  HarmonicRitzSet set;
  set.values.reserve(m);
  set.vectors.resize(m, m);
  for (Index j = 0; j < m; ++j) {
    const EigenPair& p = pairs[order[j]];
    set.values.push_back(p.value);
    set.vectors.col(j) = p.vector / p.vector.norm();
  }

  Index kept = std::min(k, m);
  if (kept >= 1 && kept < m) {
    const Scalar last = set.values[kept - 1];
    const double scale = std::abs(last) + 1e-300;
    if (std::abs(last.imag()) > 1e-10 * scale) {
      bool partner_inside = false;
      for (Index j = 0; j + 1 < kept; ++j) {
        if (std::abs(set.values[j] - std::conj(last)) <= 1e-8 * scale) {
          partner_inside = true;
          break;
        }
      }
      if (!partner_inside &&
          std::abs(set.values[kept] - std::conj(last)) <= 1e-8 * scale) {
        ++kept;
      }
    }
  }
  set.selection.resize(kept);
  std::iota(set.selection.begin(), set.selection.end(), Index(0));
  return set;
}

}  // namespace

KrylovFactorization arnoldi_seed(const Vector& v0, Index m_max,
                                 Index deflation) {
  if (m_max < 1) {
    throw InvalidInputError("arnoldi_seed: m_max must be positive");
  }
  const double nrm = v0.norm();
  if (!(nrm > 0.0) || !v0.allFinite()) {
    throw InvalidInputError("arnoldi_seed: start vector must be nonzero");
  }
  KrylovFactorization fact;
  fact.V = Matrix::Zero(v0.size(), m_max + 1);
  fact.Hbar = Matrix::Zero(m_max + 1, m_max);
  fact.V.col(0) = v0 / nrm;
  fact.size = 0;
  fact.deflation = deflation;
  fact.max_size = m_max;
  return fact;
}

void extend_arnoldi(const LinearOperator& op, KrylovFactorization& fact,
                    Index target_m, long* matvecs) {
  if (target_m > fact.max_size) {
    throw InvalidInputError("extend_arnoldi: target exceeds capacity");
  }
  if (fact.breakdown) {
    return;
  }
  Vector w(fact.n());
  for (Index j = fact.size; j < target_m; ++j) {
    op.apply_fn(fact.V.col(j), w);
    if (matvecs) {
      ++*matvecs;
    }
    const double pre_norm = w.norm();
    auto basis = fact.V.leftCols(j + 1);
    Vector h = basis.adjoint() * w;
    w.noalias() -= basis * h;
    Vector h2 = basis.adjoint() * w;
    w.noalias() -= basis * h2;
    h += h2;
    fact.Hbar.col(j).head(j + 1) = h;
    const double nrm = w.norm();
    if (nrm < kBreakdownTol * std::max(pre_norm, 1e-300)) {
      fact.Hbar(j + 1, j) = Scalar(0.0);
      fact.V.col(j + 1).setZero();
      fact.size = j + 1;
      fact.breakdown = true;
      return;
    }
    fact.Hbar(j + 1, j) = Scalar(nrm);
    fact.V.col(j + 1) = w / nrm;
    fact.size = j + 1;
  }
}

std::vector<Scalar> ritz_values(const KrylovFactorization& fact) {
  if (fact.size < 1) {
    throw InvalidInputError("ritz_values: empty factorization");
  }
  auto pairs = small_eig(fact.square_block());
  std::vector<Scalar> values;
  values.reserve(pairs.size());
  for (const auto& p : pairs) {
    values.push_back(p.value);
  }
  std::stable_sort(values.begin(), values.end(), [](Scalar a, Scalar b) {
    return std::abs(a) < std::abs(b);
  });
  return values;
}

HarmonicRitzSet harmonic_ritz(const KrylovFactorization& fact, Index k,
                              Scalar shift) {
  const Index m = fact.size;
  if (m < 1 || k < 1 || k >= m) {
    throw InvalidInputError("harmonic_ritz: need 1 <= k < m");
  }
  Matrix H = fact.square_block();
  H.diagonal().array() -= shift;
  const Scalar h = fact.subdiag();
  const double h2 = std::norm(h);
  Matrix G = H;
  if (h2 > 0.0) {
    Vector em = Vector::Zero(m);
    em(m - 1) = Scalar(1.0);
    Vector f;
    try {
      f = solve_square(H.adjoint(), em);
    } catch (const SingularityError& e) {
      throw DeflationFailureError(
          std::string("harmonic_ritz: shifted block singular (") + e.what() +
          ")");
    }
    G.col(m - 1) += h2 * f;
  }
  return sort_and_select(small_eig(G), k);
}

HarmonicRitzSet ritz_pairs(const KrylovFactorization& fact, Index k,
                           Scalar shift) {
  const Index m = fact.size;
  if (m < 1 || k < 1 || k > m) {
    throw InvalidInputError("ritz_pairs: need 1 <= k <= m");
  }
  Matrix H = fact.square_block();
  H.diagonal().array() -= shift;
  return sort_and_select(small_eig(H), k);
}

KrylovFactorization deflated_restart(const KrylovFactorization& fact, Index k,
                                     const Vector& residual_coeffs,
                                     Scalar base_shift, DeflationKind kind) {
  const Index m = fact.size;
  if (residual_coeffs.size() != m + 1) {
    throw InvalidInputError("deflated_restart: residual coefficient length");
  }
  HarmonicRitzSet set = (kind == DeflationKind::Harmonic)
                            ? harmonic_ritz(fact, k, base_shift)
                            : ritz_pairs(fact, k, base_shift);
  Index k_act = static_cast<Index>(set.selection.size());

  Matrix G(m, k_act);
  for (Index j = 0; j < k_act; ++j) {
    G.col(j) = set.vectors.col(set.selection[j]);
  }
  // Orthonormalize the coefficient vectors; R's triangularity keeps
  // span(P_k columns 1..j) = span(g_1..g_j), so truncating the basis later
  // truncates the kept pairs in order.
  QRFactors qg = qr_factor(G);
  const double gscale = G.norm();
  for (Index j = 0; j < k_act; ++j) {
    if (std::abs(qg.R(j, j)) < 1e-12 * gscale) {
      k_act = j;  // dependent coefficient vectors; keep the leading set
      break;
    }
  }
  if (k_act < 1) {
    throw DeflationFailureError(
        "deflated_restart: no independent coefficient vectors");
  }

  Matrix P = Matrix::Zero(m + 1, k_act + 1);
  P.topLeftCorner(m, k_act) = qg.Q.leftCols(k_act);
  // Append the residual direction, orthogonalized against the pair block.
  Vector p = residual_coeffs;
  p.noalias() -= P.leftCols(k_act) * (P.leftCols(k_act).adjoint() * p);
  p.noalias() -= P.leftCols(k_act) * (P.leftCols(k_act).adjoint() * p);
  const double pnorm = p.norm();
  if (pnorm < 1e-13 * (residual_coeffs.norm() + 1e-300)) {
    // Residual already inside the pair span; complete with e_{m+1}, which
    // is orthogonal to the zero-padded pair block.
    p.setZero();
    p(m) = Scalar(1.0);
    p.noalias() -= P.leftCols(k_act) * (P.leftCols(k_act).adjoint() * p);
    p /= p.norm();
  } else {
    p /= pnorm;
  }
  P.col(k_act) = p;

  KrylovFactorization out;
  out.V = Matrix::Zero(fact.n(), fact.max_size + 1);
  out.Hbar = Matrix::Zero(fact.max_size + 1, fact.max_size);
  out.V.leftCols(k_act + 1).noalias() = fact.basis() * P;
  out.Hbar.topLeftCorner(k_act + 1, k_act).noalias() =
      P.adjoint() * (fact.small_matrix() * P.topLeftCorner(m, k_act));
  out.size = k_act;
  out.deflation = k_act;
  out.max_size = fact.max_size;

  // One CGS2 pass over the compressed columns keeps the basis orthonormal
  // across long restart chains.
  for (Index j = 0; j <= k_act; ++j) {
    auto prev = out.V.leftCols(j);
    if (j > 0) {
      Vector proj = prev.adjoint() * out.V.col(j);
      out.V.col(j).noalias() -= prev * proj;
      proj = prev.adjoint() * out.V.col(j);
      out.V.col(j).noalias() -= prev * proj;
    }
    out.V.col(j) /= out.V.col(j).norm();
  }
  return out;
}

double orthonormality_defect(const KrylovFactorization& fact) {
  // On breakdown the (m+1)-th column is identically zero and not part of
  // the basis.
  const Index cols = fact.size + (fact.breakdown ? 0 : 1);
  auto basis = fact.V.leftCols(cols);
  Matrix gram = basis.adjoint() * basis;
  gram.diagonal().array() -= Scalar(1.0);
  return gram.norm();
}

double recurrence_defect(const LinearOperator& op,
                         const KrylovFactorization& fact) {
  const Index m = fact.size;
  Vector w(fact.n());
  double sq = 0.0;
  for (Index j = 0; j < m; ++j) {
    op.apply_fn(fact.V.col(j), w);
    w.noalias() -= fact.basis() * fact.small_matrix().col(j);
    sq += w.squaredNorm();
  }
  const double scale = fact.small_matrix().norm();
  return std::sqrt(sq) / (scale > 0 ? scale : 1.0);
}

}  // namespace kshift
