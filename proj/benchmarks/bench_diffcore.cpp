#include <benchmark/benchmark.h>

#include "daaclab/common/rng.hpp"
#include "daaclab/diffcore/mlp.hpp"
#include "daaclab/diffcore/ops.hpp"
#include "daaclab/diffcore/parameter_store.hpp"
#include "daaclab/diffcore/tape.hpp"

namespace {

using namespace daaclab;

std::vector<double> gaussian(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

void BM_MatmulForwardBackward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t k = 64, m = 64;
  Rng rng(1);
  diff::ParameterStore store;
  store.add("w", {k, m}, gaussian(k * m, rng));
  const std::vector<double> x = gaussian(n * k, rng);
  for (auto _ : state) {
    diff::Tape tape;
    const diff::Var y = diff::matmul(tape.constant({n, k}, x), tape.parameter(store, "w"));
    tape.backward(diff::sum(y));
    benchmark::DoNotOptimize(store.at("w").grad->data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * k * m));
}
BENCHMARK(BM_MatmulForwardBackward)->Arg(64)->Arg(512)->Arg(2048);

void BM_MlpForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const diff::MlpSpec spec{{32, 64, 64}, diff::Activation::kTanh, true};
  Rng rng(2);
  diff::ParameterStore store;
  diff::init_mlp(store, "enc", spec, rng, {1.41421356237});
  const std::vector<double> x = gaussian(n * 32, rng);
  for (auto _ : state) {
    diff::Tape tape;
    const diff::Var y = diff::forward_mlp(tape, std::as_const(store), "enc", spec,
                                          tape.constant({n, 32}, x));
    benchmark::DoNotOptimize(y.id());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_MlpForward)->Arg(64)->Arg(2048);

void BM_MlpBackward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const diff::MlpSpec spec{{32, 64, 64}, diff::Activation::kTanh, true};
  Rng rng(3);
  diff::ParameterStore store;
  diff::init_mlp(store, "enc", spec, rng, {1.41421356237});
  const std::vector<double> x = gaussian(n * 32, rng);
  for (auto _ : state) {
    diff::Tape tape;
    const diff::Var y = diff::forward_mlp(tape, store, "enc", spec, tape.constant({n, 32}, x));
    tape.backward(diff::mean(y));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_MlpBackward)->Arg(64)->Arg(2048);

}  // namespace
