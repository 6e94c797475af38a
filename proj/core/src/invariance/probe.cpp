#include "daaclab/invariance/probe.hpp"

#include <vector>

#include "daaclab/common/error.hpp"
#include "daaclab/common/hash.hpp"
#include "daaclab/diffcore/adam.hpp"
#include "daaclab/invariance/discriminator.hpp"
#include "daaclab/invariance/pairs.hpp"

namespace daaclab::invariance {
namespace {

void check(const CellFeatures& f) {
  if (f.buffer == nullptr || f.width == 0 ||
      f.values.size() != f.buffer->size() * f.width) {
    throw DimensionError("order probe: features do not cover the buffer");
  }
}

void gather(const CellFeatures& f, const PairBatch& pairs, std::vector<double>& first,
            std::vector<double>& second) {
  first.clear();
  second.clear();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto a = f.values.subspan(pairs.first[i] * f.width, f.width);
    const auto b = f.values.subspan(pairs.second[i] * f.width, f.width);
    first.insert(first.end(), a.begin(), a.end());
    second.insert(second.end(), b.begin(), b.end());
  }
}

double accuracy(const Discriminator& d, const CellFeatures& f, const PairBatch& pairs) {
  if (pairs.empty()) return 0.0;
  std::vector<double> first, second;
  gather(f, pairs, first, second);
  return discriminator_accuracy(d.probabilities(first, second, pairs.size()), pairs.labels);
}

}  // namespace

ProbeResult train_order_probe(const CellFeatures& train, const CellFeatures& heldout,
                              const ProbeOptions& options) {
  check(train);
  check(heldout);
  if (train.width != heldout.width) {
    throw DimensionError("order probe: feature widths differ");
  }
  Rng init(hash_combine(options.seed, 1));
  Rng sampler(hash_combine(options.seed, 2));
  Discriminator d(train.width, options.hidden, init);
  diff::AdamOptions adam;
  adam.learning_rate = options.learning_rate;
  diff::AdamState state(d.params(), adam);

  ProbeResult result;
  std::vector<double> first, second;
  for (std::size_t step = 0; step < options.steps; ++step) {
    const PairBatch pairs = sample_order_pairs(*train.buffer, options.pairs_per_step, sampler);
    if (pairs.empty()) break;
    gather(train, pairs, first, second);
    diff::Tape tape;
    const diff::Var a = tape.constant({pairs.size(), train.width}, first);
    const diff::Var b = tape.constant({pairs.size(), train.width}, second);
    const diff::Var loss = *discriminator_loss(d.logits(tape, a, b), pairs.labels);
    tape.backward(loss);
    diff::adam_step(d.params(), state);
  }

  Rng eval(hash_combine(options.seed, 3));
  const PairBatch train_eval = sample_order_pairs(*train.buffer, options.eval_pairs, eval);
  const PairBatch heldout_eval = sample_order_pairs(*heldout.buffer, options.eval_pairs, eval);
  result.train_pairs = train_eval.size();
  result.heldout_pairs = heldout_eval.size();
  result.train_accuracy = accuracy(d, train, train_eval);
  result.heldout_accuracy = accuracy(d, heldout, heldout_eval);
  return result;
}

}  // namespace daaclab::invariance
