#include <gtest/gtest.h>

#include <cmath>

#include "daaclab/common/rng.hpp"
#include "daaclab/diffcore/ops.hpp"
#include "daaclab/diffcore/tape.hpp"
#include "daaclab/envs/vec_env.hpp"
#include "daaclab/invariance/discriminator.hpp"
#include "daaclab/invariance/pairs.hpp"
#include "daaclab/invariance/probe.hpp"
#include "daaclab/rollout/buffer.hpp"

namespace daaclab::invariance {
namespace {

using diff::Tape;
using diff::Var;

double logit(double p) { return std::log(p / (1.0 - p)); }

rollout::RolloutBuffer episodes_buffer(std::size_t steps, std::size_t envs, std::size_t every) {
  rollout::RolloutBuffer b(steps, envs, 1);
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t n = 0; n < envs; ++n) {
      const std::size_t i = b.index(t, n);
      b.dones[i] = (t + 1) % every == 0;
      b.episode_steps[i] = static_cast<int>(t % every);
    }
  }
  return b;
}

TEST(Pairs, SingleTwoStepEpisode) {
  rollout::RolloutBuffer b = episodes_buffer(2, 1, 2);
  Rng rng(1);
  const PairBatch p = sample_order_pairs(b, 50, rng);
  ASSERT_EQ(p.size(), 50u);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NE(p.first[i], p.second[i]);
    EXPECT_EQ(p.labels[i], p.first[i] < p.second[i] ? 1.0 : 0.0);
  }
}

TEST(Pairs, LengthOneEpisodesGiveEmptyBatch) {
  rollout::RolloutBuffer b = episodes_buffer(6, 3, 1);
  Rng rng(1);
  EXPECT_TRUE(sample_order_pairs(b, 10, rng).empty());
}

TEST(Pairs, SameEpisodeAndBalancedLabels) {
  Rng gen(4);
  rollout::RolloutBuffer b(40, 5, 1);
  for (auto& d : b.dones) d = gen.uniform() < 0.1;
  const auto segments = episode_segments(b);
  std::vector<int> segment_of(b.size(), -1);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    for (std::size_t k = 0; k < segments[s].length; ++k) {
      segment_of[b.index(segments[s].first_step + k, segments[s].env)] = static_cast<int>(s);
    }
  }
  Rng rng(7);
  const PairBatch p = sample_order_pairs(b, 10000, rng);
  double ones = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    ASSERT_EQ(segment_of[p.first[i]], segment_of[p.second[i]]);
    ASSERT_NE(p.first[i], p.second[i]);
    const bool earlier = p.first[i] / b.num_envs < p.second[i] / b.num_envs;
    ASSERT_EQ(p.labels[i], earlier ? 1.0 : 0.0);
    ones += p.labels[i];
  }
  EXPECT_NEAR(ones / 10000.0, 0.5, 0.02);
}

TEST(Losses, DiscriminatorExamples) {
  Tape tape;
  const std::vector<double> labels = {1.0, 0.0};
  const Var l = tape.constant({2}, {logit(0.9), logit(0.2)});
  EXPECT_NEAR(discriminator_loss(l, labels)->item(), 0.164252, 1e-6);
  EXPECT_NEAR(discriminator_loss(l, labels)->item(), 0.5 * (-std::log(0.9) - std::log(0.8)), 1e-12);
  const Var half = tape.constant({2}, {0.0, 0.0});
  EXPECT_NEAR(discriminator_loss(half, labels)->item(), std::log(2.0), 1e-12);
  const Var sharp = tape.constant({2}, {40.0, -40.0});
  EXPECT_LT(discriminator_loss(sharp, labels)->item(), 1e-15);
  // The literal form ignores labels.
  EXPECT_NEAR(discriminator_loss(l, labels, true)->item(),
              0.5 * (-std::log(0.9) - std::log(0.1) - std::log(0.2) - std::log(0.8)), 1e-12);
}

TEST(Losses, EncoderExamples) {
  Tape tape;
  EXPECT_NEAR(encoder_invariance_loss(tape.constant({3}, {0.0, 0.0, 0.0}))->item(), std::log(2.0),
              1e-12);
  EXPECT_NEAR(encoder_invariance_loss(tape.constant({1}, {logit(0.9)}))->item(), 1.203973, 1e-6);
}

TEST(Losses, EncoderLossBoundedBelowByLn2) {
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    Tape tape;
    const double x = 4.0 * rng.normal();
    EXPECT_GE(encoder_invariance_loss(tape.constant({1}, {x}))->item(), std::log(2.0) - 1e-15);
  }
}

TEST(Losses, EncoderStationaryAtHalf) {
  diff::ParameterStore s;
  s.add("z", {2}, {0.0, 0.0});
  Tape tape;
  tape.backward(*encoder_invariance_loss(tape.parameter(s, "z")));
  for (const double g : *s.at("z").grad) EXPECT_NEAR(g, 0.0, 1e-15);
}

TEST(Losses, EmptyBatchSkips) {
  // Empty tensors cannot exist, so an empty batch is signalled through the
  // label span.
  Tape tape;
  const Var l = tape.constant({1}, {0.3});
  EXPECT_FALSE(discriminator_loss(l, std::span<const double>{}).has_value());
}

TEST(Accuracy, HandCount) {
  const std::vector<double> probs = {0.9, 0.2, 0.6, 0.4, 0.51, 0.49, 0.7, 0.1, 0.8, 0.3};
  const std::vector<double> labels = {1, 0, 0, 0, 1, 1, 1, 1, 1, 0};
  // Agreements: 1 1 0 1 1 0 1 0 1 1 -> 7 of 10.
  EXPECT_DOUBLE_EQ(discriminator_accuracy(probs, labels), 0.7);
  EXPECT_DOUBLE_EQ(discriminator_accuracy(labels, labels), 1.0);
}

TEST(Discriminator, OutputsInsideUnitInterval) {
  Rng rng(3);
  Discriminator d(4, 8, rng);
  std::vector<double> a(40), b(40);
  for (auto& x : a) x = 5.0 * rng.normal();
  for (auto& x : b) x = 5.0 * rng.normal();
  for (const double p : d.probabilities(a, b, 10)) {
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
  }
}

TEST(Discriminator, GradientPartition) {
  Rng rng(5);
  Discriminator d(3, 8, rng);
  diff::ParameterStore enc;
  enc.add("f", {2, 3}, {0.1, 0.2, 0.3, -0.4, 0.5, 0.6});
  const std::vector<double> labels = {1.0, 0.0};

  // L_E with the discriminator frozen reaches the encoder only.
  Tape t1;
  const Var f = t1.parameter(enc, "f");
  const Var le = *encoder_invariance_loss(std::as_const(d).frozen_logits(t1, f, diff::scale(f, -1.0)));
  EXPECT_TRUE(t1.depends_on(le, enc));
  EXPECT_FALSE(t1.depends_on(le, d.params()));

  // L_D on frozen features reaches the discriminator only.
  Tape t2;
  const Var g = t2.frozen(enc, "f");
  const Var ld = *discriminator_loss(d.logits(t2, g, diff::scale(g, -1.0)), labels);
  EXPECT_TRUE(t2.depends_on(ld, d.params()));
  EXPECT_FALSE(t2.depends_on(ld, enc));
}

TEST(Probe, StepFeaturesAreLearnable) {
  // Pinned encoder: the feature is the episode step itself.
  auto make = [](std::int64_t first_seed) {
    envs::FamilyParams p;
    p.hazard_density = 0.0;
    envs::VecEnv env(p, envs::seed_range(first_seed, 16), 8);
    rollout::RolloutBuffer b(64, 8, 1);
    Rng rng(static_cast<std::uint64_t>(first_seed));
    std::vector<std::size_t> actions(8);
    for (std::size_t t = 0; t < 64; ++t) {
      for (std::size_t n = 0; n < 8; ++n) b.episode_steps[b.index(t, n)] = env.state(n).step;
      for (auto& a : actions) a = rng.uniform() < 0.7 ? envs::corridor::kRight : envs::corridor::kNoop;
      const auto results = env.step(actions);
      for (std::size_t n = 0; n < 8; ++n) b.dones[b.index(t, n)] = results[n].done;
    }
    std::vector<double> features(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) features[i] = 0.05 * b.episode_steps[i];
    return std::make_pair(std::move(b), std::move(features));
  };
  auto [train, train_f] = make(1);
  auto [held, held_f] = make(501);
  ProbeOptions o;
  o.steps = 500;
  const ProbeResult r = train_order_probe({&train, train_f, 1}, {&held, held_f, 1}, o);
  EXPECT_GT(r.heldout_pairs, 0u);
  EXPECT_GT(r.heldout_accuracy, 0.95);
}

TEST(Probe, ConstantFeaturesStayAtChance) {
  rollout::RolloutBuffer b = episodes_buffer(32, 4, 8);
  const std::vector<double> features(b.size() * 2, 0.25);
  ProbeOptions o;
  o.steps = 100;
  const ProbeResult r = train_order_probe({&b, features, 2}, {&b, features, 2}, o);
  EXPECT_NEAR(r.heldout_accuracy, 0.5, 0.05);
}

}  // namespace
}  // namespace daaclab::invariance
