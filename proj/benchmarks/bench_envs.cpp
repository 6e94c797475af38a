#include <benchmark/benchmark.h>

#include "daaclab/common/rng.hpp"
#include "daaclab/envs/level.hpp"
#include "daaclab/envs/vec_env.hpp"
#include "daaclab/rollout/buffer.hpp"
#include "daaclab/rollout/returns.hpp"

namespace {

using namespace daaclab;

void BM_GenerateLevel(benchmark::State& state) {
  const envs::FamilyParams params;
  std::int64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(envs::generate_level(seed++, params));
}
BENCHMARK(BM_GenerateLevel);

void BM_VecEnvStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  envs::VecEnv env(envs::FamilyParams{}, envs::train_seeds(200), n);
  Rng rng(4);
  std::vector<std::size_t> actions(n);
  for (auto _ : state) {
    for (auto& a : actions) a = rng.uniform() < 0.6 ? 2 : static_cast<std::size_t>(rng.next_u64() % 3);
    benchmark::DoNotOptimize(env.step(actions));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_VecEnvStep)->Arg(1)->Arg(64);

void BM_Gae(benchmark::State& state) {
  const std::size_t steps = 256, envs = 64;
  rollout::RolloutBuffer b(steps, envs, 1);
  Rng rng(5);
  for (std::size_t i = 0; i < b.size(); ++i) {
    b.rewards[i] = rng.uniform() < 0.01 ? 10.0 : 0.0;
    b.values[i] = rng.normal();
    b.dones[i] = rng.uniform() < 0.01;
  }
  for (auto& v : b.bootstrap_values) v = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(rollout::compute_gae(b, 0.999, 0.95).data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(steps * envs));
}
BENCHMARK(BM_Gae);

}  // namespace
