#include <benchmark/benchmark.h>

#include <vector>

#include "pidtf/pid_optimizer.hpp"
#include "pidtf/rng.hpp"
#include "pidtf/split.hpp"
#include "pidtf/synthetic.hpp"
#include "pidtf/trainer.hpp"

using namespace pidtf;

namespace {

SynthResult make_instance(std::uint64_t entries_target) {
  // 100k-cell grid; density picks the entry count.
  const Dims dims{100, 50, 20};
  const double density = static_cast<double>(entries_target) / static_cast<double>(dims.cells());
  return synth_low_rank(dims, 3, 11, 0.0, density);
}

Hyperparams bench_hyper(int rank) {
  Hyperparams h;
  h.rank = rank;
  h.eta = 0.05;
  h.lambda = 0.001;
  h.c_i = 0.3;
  h.c_d = 0.1;
  return h;
}

}  // namespace

static void BM_Predict(benchmark::State& state) {
  const int rank = static_cast<int>(state.range(0));
  const auto f = init_factors({200, 40, 20}, rank, 3);
  Rng rng(4);
  for (auto _ : state) {
    const auto i = static_cast<std::uint32_t>(draw_below(rng, 200));
    const auto j = static_cast<std::uint32_t>(draw_below(rng, 40));
    const auto k = static_cast<std::uint32_t>(draw_below(rng, 20));
    benchmark::DoNotOptimize(predict(f, i, j, k));
  }
}
BENCHMARK(BM_Predict)->Arg(4)->Arg(8)->Arg(20);

static void BM_InstanceUpdate(benchmark::State& state) {
  const int rank = static_cast<int>(state.range(0));
  const Dims dims{200, 40, 20};
  auto f = init_factors(dims, rank, 5);
  ControllerState controller(dims, rank);
  const Hyperparams h = bench_hyper(rank);
  UpdateScratch scratch;
  Rng rng(6);
  for (auto _ : state) {
    const Entry e{static_cast<std::uint32_t>(draw_below(rng, 200)),
                  static_cast<std::uint32_t>(draw_below(rng, 40)),
                  static_cast<std::uint32_t>(draw_below(rng, 20)), uniform_in(rng, 0.0, 3.0)};
    apply_instance_update(f, controller, e, h, scratch);
  }
}
BENCHMARK(BM_InstanceUpdate)->Arg(4)->Arg(8)->Arg(20);

// One full training epoch (updates plus validation pass) per iteration;
// the argument is the known-entry count, expected to scale linearly.
static void BM_TrainEpoch(benchmark::State& state) {
  const auto synth = make_instance(static_cast<std::uint64_t>(state.range(0)));
  const auto splits = split(synth.tensor, {0.6, 0.2, 0.2}, 11);
  Hyperparams h = bench_hyper(8);
  h.tol = 0.0;
  h.max_epochs = 1;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        train(splits.train, splits.validation, synth.tensor.dims(), h, seed++));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TrainEpoch)->Arg(10000)->Arg(20000)->Arg(40000)->Complexity(benchmark::oN);

static void BM_Evaluate(benchmark::State& state) {
  const auto synth = make_instance(20000);
  const auto f = init_factors(synth.tensor.dims(), 8, 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(f, synth.tensor.entries()));
  }
}
BENCHMARK(BM_Evaluate);

BENCHMARK_MAIN();
