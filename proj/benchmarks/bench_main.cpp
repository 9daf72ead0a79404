#include "kshift/arnoldi.hpp"
#include "kshift/multi_rhs.hpp"
#include "kshift/shifted_solvers.hpp"
#include "kshift/smallmat.hpp"

#include <benchmark/benchmark.h>

using namespace kshift;

namespace {

void BM_ArnoldiCycle(benchmark::State& state) {
  const Index n = state.range(0);
  const Index m = 25;
  const LinearOperator op = bidiagonal_operator(n);
  const Vector v0 = random_rhs(n, 1, Field::Real);
  for (auto _ : state) {
    KrylovFactorization fact = arnoldi_seed(v0, m);
    extend_arnoldi(op, fact, m);
    benchmark::DoNotOptimize(fact.Hbar.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_ArnoldiCycle)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_ShiftedQrSolve(benchmark::State& state) {
  const Index m = state.range(0);
  const LinearOperator op = bidiagonal_operator(2 * m);
  KrylovFactorization fact = arnoldi_seed(random_rhs(2 * m, 2, Field::Real),
                                          m);
  extend_arnoldi(op, fact, m);
  Matrix w = fact.small_matrix();
  w.diagonal().array() -= Scalar(-0.4);
  const Vector c = random_rhs(m + 1, 3, Field::Real);
  for (auto _ : state) {
    const QRFactors qr = qr_factor(w);
    const Vector qc = qr.Q.adjoint() * c;
    benchmark::DoNotOptimize(qc.data());
  }
}
BENCHMARK(BM_ShiftedQrSolve)->Arg(15)->Arg(25)->Arg(50)->Arg(100);

void BM_HarmonicRitz(benchmark::State& state) {
  const Index m = state.range(0);
  const LinearOperator op = bidiagonal_operator(1000);
  KrylovFactorization fact = arnoldi_seed(random_rhs(1000, 4, Field::Real),
                                          m);
  extend_arnoldi(op, fact, m);
  for (auto _ : state) {
    auto set = harmonic_ritz(fact, m / 3);
    benchmark::DoNotOptimize(set.values.data());
  }
}
BENCHMARK(BM_HarmonicRitz)->Arg(25)->Arg(50)->Arg(80);

void BM_MinresProject(benchmark::State& state) {
  const Index n = 1000;
  const LinearOperator op = bidiagonal_operator(n);
  const Vector b = random_rhs(n, 5, Field::Real);
  SolverConfig cfg;
  cfg.m = 25;
  cfg.k = state.range(0);
  cfg.rtol = 1e-10;
  cfg.max_matvecs = 20000;
  const auto res = gmres_dr_sh(op, b, ShiftSet{{Scalar(0.0)}}, cfg);
  const Vector r0 = random_rhs(n, 6, Field::Real);
  const Vector x0 = Vector::Zero(n);
  for (auto _ : state) {
    auto [x, r] = minres_project(res.deflation, x0, r0);
    benchmark::DoNotOptimize(x.data());
    benchmark::DoNotOptimize(r.data());
  }
}
BENCHMARK(BM_MinresProject)->Arg(5)->Arg(10)->Arg(20);

void BM_DeflatedSolve(benchmark::State& state) {
  const Index n = state.range(0);
  const LinearOperator op = bidiagonal_operator(n);
  const Vector b = random_rhs(n, 7, Field::Real);
  const ShiftSet shifts{{Scalar(0.0), Scalar(-0.4), Scalar(-2.0)}};
  SolverConfig cfg;
  cfg.m = 25;
  cfg.k = 10;
  cfg.rtol = 1e-10;
  cfg.max_matvecs = 20000;
  for (auto _ : state) {
    auto res = gmres_dr_sh(op, b, shifts, cfg);
    benchmark::DoNotOptimize(res.matvecs);
  }
}
BENCHMARK(BM_DeflatedSolve)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
