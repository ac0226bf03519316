#include <benchmark/benchmark.h>

#include "qbayes/definetti.hpp"
#include "qbayes/entropy.hpp"
#include "qbayes/instruments.hpp"
#include "qbayes/locality.hpp"
#include "qbayes/states.hpp"

using namespace qbayes;

static void BM_Subentropy(benchmark::State& state) {
  Xoshiro256 rng(1);
  const DensityOperator rho = random_state(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(subentropy(rho));
}
BENCHMARK(BM_Subentropy)->DenseRange(2, 8, 2);

static void BM_StandardIcPovm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(standard_ic_povm(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_StandardIcPovm)->DenseRange(2, 6);

static void BM_FactorUpdate(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  Xoshiro256 rng(2);
  const DensityOperator rho = random_state(dim, rng);
  const KrausInstrument inst = efficient_from_povm(random_povm(dim, 4, rng));
  for (auto _ : state) benchmark::DoNotOptimize(factor_update(rho, inst));
}
BENCHMARK(BM_FactorUpdate)->Arg(2)->Arg(3)->Arg(4);

static void BM_PosteriorUpdate(benchmark::State& state) {
  const auto grid = bloch_ball_grid(static_cast<std::size_t>(state.range(0)));
  const auto priors = contrasting_priors(grid);
  const auto sqm = canonical_sqm(2);
  const std::vector<std::size_t> counts{40, 30, 20, 10};
  for (auto _ : state) benchmark::DoNotOptimize(posterior_update_counts(priors.first, sqm->base, counts));
}
BENCHMARK(BM_PosteriorUpdate)->Arg(200)->Arg(1000);

static void BM_JointReconstruction(benchmark::State& state) {
  Xoshiro256 rng(3);
  const Matrix joint = random_density_matrix(6, rng);
  const BilinearFrame frame = BilinearFrame::from_operator(joint, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_joint_operator(frame));
}
BENCHMARK(BM_JointReconstruction);

static void BM_RealCounterexample(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(real_counterexample(2, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_RealCounterexample)->Arg(150)->Arg(600)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
