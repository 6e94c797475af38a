#include <benchmark/benchmark.h>

#include <string>

#include "daaclab/algos/trainer.hpp"

namespace {

using namespace daaclab;

// One full update (rollout plus all optimization phases) at a reduced batch.
void BM_TrainerUpdate(benchmark::State& state) {
  algos::ExperimentConfig c;
  c.algo.algorithm = static_cast<algos::Algorithm>(state.range(0));
  c.algo.num_envs = 16;
  c.algo.num_steps = 64;
  c.algo.updates = 1 << 20;
  algos::Trainer trainer(c, 1);
  for (auto _ : state) benchmark::DoNotOptimize(trainer.update());
  state.SetLabel(std::string(algos::to_string(c.algo.algorithm)));
  state.SetItemsProcessed(state.iterations() * 16 * 64);
}
BENCHMARK(BM_TrainerUpdate)
    ->Arg(static_cast<int>(algos::Algorithm::kPpo))
    ->Arg(static_cast<int>(algos::Algorithm::kDaac))
    ->Arg(static_cast<int>(algos::Algorithm::kIdaac))
    ->Unit(benchmark::kMillisecond);

}  // namespace

// libbenchmark_main.a ships LTO bytecode from another compiler build.
BENCHMARK_MAIN();
