#include <benchmark/benchmark.h>

#include "spinent/spinent.hpp"

namespace {

using namespace spinent;

void BM_BuildHamiltonian(benchmark::State& state) {
  const ChainSpec spec{Model::Heisenberg, static_cast<int>(state.range(0)), 1.0,
                       Boundary::Periodic};
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_hamiltonian(spec));
  }
}
BENCHMARK(BM_BuildHamiltonian)->Arg(8)->Arg(10)->Arg(12);

void BM_DiagonalizeBlocked(benchmark::State& state) {
  const ChainSpec spec{Model::Heisenberg, static_cast<int>(state.range(0)), 1.0,
                       Boundary::Periodic};
  const auto h = build_hamiltonian(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(diagonalize(h));
  }
}
BENCHMARK(BM_DiagonalizeBlocked)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_DiagonalizeDense(benchmark::State& state) {
  // Unblocked full-matrix solve, for comparison against the sector path.
  const ChainSpec spec{Model::Heisenberg, static_cast<int>(state.range(0)), 1.0,
                       Boundary::Periodic};
  const auto h = build_hamiltonian(spec);
  for (auto _ : state) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix());
    benchmark::DoNotOptimize(solver.eigenvalues());
  }
}
BENCHMARK(BM_DiagonalizeDense)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_InternalEnergySweep(benchmark::State& state) {
  const ChainSpec spec{Model::Heisenberg, 10, 1.0, Boundary::Periodic};
  const auto dec = diagonalize(build_hamiltonian(spec));
  for (auto _ : state) {
    double total = 0.0;
    for (int i = 1; i <= 64; ++i) {
      total += internal_energy(ThermalEnsemble(dec, 0.05 * i));
    }
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_InternalEnergySweep);

void BM_ReducedGibbsPair(benchmark::State& state) {
  const ChainSpec spec{Model::Heisenberg, 10, 1.0, Boundary::Periodic};
  const auto dec = diagonalize(build_hamiltonian(spec));
  const ThermalEnsemble ensemble(dec, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reduced_thermal_density_matrix(ensemble, {1, 2}));
  }
}
BENCHMARK(BM_ReducedGibbsPair)->Unit(benchmark::kMillisecond);

void BM_SampleProducibleEnergy(benchmark::State& state) {
  const ChainSpec spec{Model::Heisenberg, 8, 1.0, Boundary::Periodic};
  const auto h = build_hamiltonian(spec);
  const auto family = dimer_covering(8, 0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(expectation(h, sample_producible(family, ++seed)));
  }
}
BENCHMARK(BM_SampleProducibleEnergy);

}  // namespace

BENCHMARK_MAIN();
