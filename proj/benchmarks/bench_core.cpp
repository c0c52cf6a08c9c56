#include <benchmark/benchmark.h>

#include <vector>

#include "qlatt/gibbs.hpp"
#include "qlatt/models.hpp"
#include "qlatt/operators.hpp"
#include "qlatt/spectral.hpp"

namespace {

using namespace qlatt;

void bm_assemble_spin_chain(benchmark::State& state) {
  int length = static_cast<int>(state.range(0));
  Interaction phi = transverse_ising_interaction(1.0, 0.7);
  Region region = Region::chain(length);
  for (auto _ : state) {
    AssembledOperator h = assemble(phi, region);
    benchmark::DoNotOptimize(h.matrix.data());
  }
  state.SetComplexityN(1L << length);
}
BENCHMARK(bm_assemble_spin_chain)->DenseRange(4, 10, 2)->Complexity();

void bm_assemble_hubbard(benchmark::State& state) {
  int length = static_cast<int>(state.range(0));
  for (auto _ : state) {
    HubbardOperators ops = build_hubbard(length, {1.0}, 4.0);
    benchmark::DoNotOptimize(ops.hamiltonian.matrix.data());
  }
  state.SetComplexityN(1L << (2 * length));
}
BENCHMARK(bm_assemble_hubbard)->DenseRange(1, 4, 1)->Complexity();

void bm_decompose(benchmark::State& state) {
  int length = static_cast<int>(state.range(0));
  AssembledOperator h = build_spin_chain(length, "transverse_ising", 1.0, 0.7);
  for (auto _ : state) {
    SpectralDecomposition sd = decompose(h.matrix);
    benchmark::DoNotOptimize(sd.dim());
  }
  state.SetComplexityN(1L << length);
}
BENCHMARK(bm_decompose)->DenseRange(4, 10, 2)->Complexity()->Unit(benchmark::kMillisecond);

void bm_blocked_decompose(benchmark::State& state) {
  int length = static_cast<int>(state.range(0));
  HubbardOperators ops = build_hubbard(length, {1.0}, 4.0);
  AssembledOperator h_eff = effective_hamiltonian(ops.hamiltonian, 1.0, 0.3, &ops.number);
  Eigen::VectorXd charge = ops.number.matrix.diagonal().real();
  for (auto _ : state) {
    BlockedSpectral bs = decompose_blocked(h_eff.matrix, charge);
    benchmark::DoNotOptimize(bs.dim);
  }
  state.SetComplexityN(1L << (2 * length));
}
BENCHMARK(bm_blocked_decompose)->DenseRange(2, 5, 1)->Complexity()->Unit(benchmark::kMillisecond);

void bm_mgf_build(benchmark::State& state) {
  int length = static_cast<int>(state.range(0));
  AssembledOperator h = build_spin_chain(length, "transverse_ising", 0.08, 0.2);
  AssembledOperator h_eff = effective_hamiltonian(h, 1.0);
  AssembledOperator k = macro_observable(spin_observable("sigma_z"), h.region);
  for (auto _ : state) {
    MgfEngine engine(h_eff, k);
    benchmark::DoNotOptimize(engine.dim());
  }
  state.SetComplexityN(1L << length);
}
BENCHMARK(bm_mgf_build)->DenseRange(4, 10, 2)->Complexity()->Unit(benchmark::kMillisecond);

void bm_mgf_sweep(benchmark::State& state) {
  int length = static_cast<int>(state.range(0));
  AssembledOperator h = build_spin_chain(length, "transverse_ising", 0.08, 0.2);
  AssembledOperator h_eff = effective_hamiltonian(h, 1.0);
  AssembledOperator k = macro_observable(spin_observable("sigma_z"), h.region);
  MgfEngine engine(h_eff, k);
  std::vector<double> alphas;
  for (int i = 0; i < 101; ++i) alphas.push_back(-1.0 + 0.02 * i);
  for (auto _ : state) {
    double acc = 0;
    for (double a : alphas) acc += engine.f(a);
    benchmark::DoNotOptimize(acc);
  }
  state.SetComplexityN(1L << length);
}
BENCHMARK(bm_mgf_sweep)->DenseRange(4, 12, 2)->Complexity();

}  // namespace

BENCHMARK_MAIN();
