#include <benchmark/benchmark.h>

#include <random>

#include "mtev/far_field_operator.hpp"
#include "mtev/lsm.hpp"
#include "mtev/spectrum.hpp"

using namespace mtev;

namespace {

ComplexMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix a(n, n);
  for (Complex& z : a.data()) z = {u(rng), u(rng)};
  return a;
}

void BM_SphBesselArray(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  const Complex z{2.3, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(sph_bessel_j_array(n_max, z));
}
BENCHMARK(BM_SphBesselArray)->Arg(15)->Arg(40);

void BM_HankelTable(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hankel1_table(static_cast<int>(state.range(0)), 2.0));
}
BENCHMARK(BM_HankelTable)->Arg(15);

void BM_ModifiedDeterminantB(benchmark::State& state) {
  const MediumParams p{2.0, 2.0, 0.5, {}};
  double eta = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mdet_b(6, eta, p));
    eta = eta > 25.0 ? 0.5 : eta + 1e-3;
  }
}
BENCHMARK(BM_ModifiedDeterminantB);

void BM_EigenvaluesK2(benchmark::State& state) {
  const MediumParams p{2.0, 2.0, 0.5, {}};
  const EigenSearch search{0.5, 25.0, 1e-3, 6, true};
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(p, search));
}
BENCHMARK(BM_EigenvaluesK2)->Unit(benchmark::kMillisecond);

void BM_Svd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ComplexMatrix a = random_matrix(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(svd(a, kDefaultSvdSweeps, state.range(1) != 0));
}
BENCHMARK(BM_Svd)->Args({64, 1})->Args({196, 0})->Args({196, 1})->Unit(benchmark::kMillisecond);

void BM_SvdModifiedOperator(benchmark::State& state) {
  const MediumParams p{2.0, 2.0, 0.5, {4.0, 0.0}};
  const DirectionGrid grid = direction_grid(7, 14);
  const ComplexMatrix m = modified_operator(assemble_F(p, grid, 14), assemble_F0(p, grid, 14)).matrix;
  for (auto _ : state) benchmark::DoNotOptimize(svd(m, kDefaultSvdSweeps, false));
}
BENCHMARK(BM_SvdModifiedOperator)->Unit(benchmark::kMillisecond);

void BM_AssembleAuxiliary(benchmark::State& state) {
  const FarFieldAssembler assembler(direction_grid(7, 14), 14);
  MediumParams p{2.0, 2.0, 0.5, {4.0, 0.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(assembler.auxiliary(p));
    p.eta += 0.01;
  }
}
BENCHMARK(BM_AssembleAuxiliary)->Unit(benchmark::kMillisecond);

void BM_AssembleFromScratch(benchmark::State& state) {
  const MediumParams p{2.0, 2.0, 0.5, {4.0, 0.0}};
  const int np = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_F(p, direction_grid(np, 2 * np), 14));
}
BENCHMARK(BM_AssembleFromScratch)->Arg(7)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_DiscrepancySolve(benchmark::State& state) {
  const MediumParams p{2.0, 2.0, 0.5, {4.0, 0.0}};
  const DirectionGrid grid = direction_grid(7, 14);
  const SvdFactors f = svd(modified_operator(assemble_F(p, grid, 14), assemble_F0(p, grid, 14)).matrix);
  const ComplexVector b = dipole_rhs(grid, {0.1, 0.2, 0.0}, {0.0, 0.0, 1.0}, 2.0);
  const RegularizationRule rule{RegularizationKind::Discrepancy, 0.0, 0.02};
  for (auto _ : state) benchmark::DoNotOptimize(regularized_solve(f, b, rule, false));
}
BENCHMARK(BM_DiscrepancySolve)->Unit(benchmark::kMicrosecond);

void BM_IndicatorSweepPoint(benchmark::State& state) {
  SweepScenario sc;
  sc.params = {2.0, 2.0, 0.5, {1.0, 0.0}};
  sc.sampling = default_sampling();
  sc.sampling.eta = {3.9};
  for (auto _ : state) benchmark::DoNotOptimize(indicator_sweep(sc));
}
BENCHMARK(BM_IndicatorSweepPoint)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
