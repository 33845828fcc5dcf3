#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

#include "swapbell/correlation.hpp"
#include "swapbell/lhv.hpp"
#include "swapbell/parity_solver.hpp"
#include "swapbell/quantum.hpp"

using namespace swapbell;

namespace {

// Odd cycle over n A-variables: Unsat, certificate uses every line.
ConstraintSet odd_cycle(std::size_t n) {
  ConstraintSet cs;
  for (std::size_t i = 0; i < n; ++i) cs.intern(FunctionTag::A, {static_cast<double>(i)});
  for (std::size_t i = 0; i < n; ++i) cs.add_constraint({{i, (i + 1) % n}, i + 1 == n ? -1 : 1, {}});
  return cs;
}

// Random Fig. 1 settings on a pi/4 grid, factorized.
ConstraintSet grid_instance(std::size_t settings, std::uint64_t seed) {
  constexpr double q = std::numbers::pi / 4;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> k(0, 7);
  std::vector<AngleSettings> s;
  for (std::size_t i = 0; i < settings; ++i) s.push_back({q * k(rng), q * k(rng), q * k(rng), q * k(rng)});
  return apply_factorization(compile_fig1(s, {+1, "bench"}));
}

void BM_Gf2OddCycle(benchmark::State& state) {
  const auto cs = odd_cycle(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gf2_solve(cs));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gf2OddCycle)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_Gf2GridInstance(benchmark::State& state) {
  const auto cs = grid_instance(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(gf2_solve(cs));
  state.counters["variables"] = static_cast<double>(cs.variable_count());
}
BENCHMARK(BM_Gf2GridInstance)->Arg(4)->Arg(32)->Arg(256);

void BM_EnumerateOddCycle(benchmark::State& state) {
  const auto cs = odd_cycle(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_solve(cs));
}
BENCHMARK(BM_EnumerateOddCycle)->DenseRange(8, 20, 4);

void BM_ProofInstanceBothSolvers(benchmark::State& state) {
  const auto cs = paper_proof_instance(0.3, 1.2, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_solve(cs));
    benchmark::DoNotOptimize(gf2_solve(cs));
  }
}
BENCHMARK(BM_ProofInstanceBothSolvers);

void BM_NumericDecomposition(benchmark::State& state) {
  const AngleSettings s{0.3, -0.2, 1.1, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(bell_bell_amplitudes_numeric(apply_all_rotations(make_vw_state(), s)));
}
BENCHMARK(BM_NumericDecomposition);

void BM_ClosedForm(benchmark::State& state) {
  const AngleSettings s{0.3, -0.2, 1.1, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(bell_bell_amplitudes_closed_form(s));
}
BENCHMARK(BM_ClosedForm);

void BM_SampleEvents(benchmark::State& state) {
  const AngleSettings s{0.3, -0.2, 1.1, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(sample_events(s, static_cast<std::size_t>(state.range(0)), 42));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleEvents)->Arg(1000)->Arg(100000);

}  // namespace
BENCHMARK_MAIN();
