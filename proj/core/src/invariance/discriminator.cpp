#include "daaclab/invariance/discriminator.hpp"

#include <cmath>

#include "daaclab/common/error.hpp"
#include "daaclab/diffcore/ops.hpp"

namespace daaclab::invariance {

namespace {
constexpr std::string_view kPrefix = "discriminator";
}

Discriminator::Discriminator(std::size_t feature_size, std::size_t hidden,
                             Rng& rng)
    : feature_size_(feature_size),
      spec_{{2 * feature_size, hidden, hidden, 1}, diff::Activation::kRelu,
            false},
      params_("discriminator") {
  diff::init_mlp(params_, kPrefix, spec_, rng, {std::sqrt(2.0), std::sqrt(2.0), 1.0});
}

diff::Var Discriminator::logits(diff::Tape& tape, diff::Var first,
                                diff::Var second) {
  const diff::Var out =
      diff::forward_mlp(tape, params_, kPrefix, spec_, diff::concat_cols(first, second));
  return diff::reshape(out, {out.rows()});
}

diff::Var Discriminator::frozen_logits(diff::Tape& tape, diff::Var first,
                                       diff::Var second) const {
  const diff::Var out =
      diff::forward_mlp(tape, params_, kPrefix, spec_, diff::concat_cols(first, second));
  return diff::reshape(out, {out.rows()});
}

std::vector<double> Discriminator::probabilities(std::span<const double> first,
                                                 std::span<const double> second,
                                                 std::size_t rows) const {
  diff::Tape tape;
  const diff::Var a = tape.constant(
      {rows, feature_size_}, std::vector<double>(first.begin(), first.end()));
  const diff::Var b = tape.constant(
      {rows, feature_size_}, std::vector<double>(second.begin(), second.end()));
  const diff::Var p = diff::sigmoid(frozen_logits(tape, a, b));
  return {p.values().begin(), p.values().end()};
}

std::optional<diff::Var> discriminator_loss(diff::Var logits,
                                            std::span<const double> labels,
                                            bool literal) {
  if (labels.empty()) return std::nullopt;
  if (labels.size() != logits.size()) {
    throw DimensionError("discriminator_loss: labels and logits differ in length");
  }
  diff::Tape& tape = logits.tape();
  // log D = log_sigmoid(z), log(1 - D) = log_sigmoid(-z).
  const diff::Var log_d = diff::log_sigmoid(logits);
  const diff::Var log_not_d = diff::log_sigmoid(diff::scale(logits, -1.0));
  if (literal) {
    return diff::scale(diff::mean(diff::add(log_d, log_not_d)), -1.0);
  }
  std::vector<double> y(labels.begin(), labels.end());
  std::vector<double> not_y(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) not_y[i] = 1.0 - labels[i];
  const diff::Var yv = tape.constant({labels.size()}, std::move(y));
  const diff::Var nyv = tape.constant({labels.size()}, std::move(not_y));
  return diff::scale(
      diff::mean(diff::add(diff::mul(yv, log_d), diff::mul(nyv, log_not_d))),
      -1.0);
}

std::optional<diff::Var> encoder_invariance_loss(diff::Var logits) {
  if (logits.size() == 0) return std::nullopt;
  const diff::Var log_d = diff::log_sigmoid(logits);
  const diff::Var log_not_d = diff::log_sigmoid(diff::scale(logits, -1.0));
  return diff::scale(diff::mean(diff::add(log_d, log_not_d)), -0.5);
}

double discriminator_accuracy(std::span<const double> probabilities,
                              std::span<const double> labels) {
  if (probabilities.size() != labels.size()) {
    throw DimensionError("discriminator_accuracy: length mismatch");
  }
  if (labels.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted_first = probabilities[i] > 0.5;
    if (predicted_first == (labels[i] > 0.5)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

}  // namespace daaclab::invariance
