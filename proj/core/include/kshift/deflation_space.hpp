/// \file deflation_space.hpp
/// Frozen (V_{k+1}, Hbar_k) with A V_k = V_{k+1} Hbar_k, captured after the
/// first right-hand side is solved and shared read-only by all later
/// projections.

#ifndef KSHIFT_DEFLATION_SPACE_HPP
#define KSHIFT_DEFLATION_SPACE_HPP

#include "kshift/types.hpp"

namespace kshift {

struct DeflationSpace {
  Matrix Vk1;     // n x (k+1), orthonormal columns
  Matrix Hbar_k;  // (k+1) x k, full

  Index k() const { return Hbar_k.cols(); }
  auto Hk() const { return Hbar_k.topRows(k()); }
  auto v_last() const { return Vk1.col(k()); }
  bool empty() const { return Hbar_k.size() == 0; }
};

}  // namespace kshift

#endif
