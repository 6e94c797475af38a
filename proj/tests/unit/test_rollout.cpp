#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "daaclab/algos/networks.hpp"
#include "daaclab/common/error.hpp"
#include "daaclab/common/rng.hpp"
#include "daaclab/diffcore/distributions.hpp"
#include "daaclab/envs/vec_env.hpp"
#include "daaclab/rollout/buffer.hpp"
#include "daaclab/rollout/collect.hpp"
#include "daaclab/rollout/minibatch.hpp"
#include "daaclab/rollout/normalizer.hpp"
#include "daaclab/rollout/returns.hpp"
#include "oracles.hpp"

namespace daaclab::rollout {
namespace {

using testing::gae_double_sum;
using testing::random_buffer;

TEST(Gae, SingleStep) {
  RolloutBuffer b(1, 1, 1);
  b.rewards[0] = 1.5;
  b.values[0] = 0.4;
  b.bootstrap_values[0] = 2.0;
  compute_gae(b, 0.9, 0.95);
  EXPECT_DOUBLE_EQ((*b.advantages)[0], 1.5 + 0.9 * 2.0 - 0.4);
}

TEST(Gae, TerminalStepIgnoresNextValue) {
  RolloutBuffer b(1, 1, 1);
  b.rewards[0] = 10.0;
  b.values[0] = 3.0;
  b.dones[0] = 1;
  b.bootstrap_values[0] = 100.0;
  compute_gae(b, 0.99, 0.95);
  EXPECT_DOUBLE_EQ((*b.advantages)[0], 7.0);
}

TEST(Gae, LambdaZeroIsDelta) {
  Rng rng(1);
  RolloutBuffer b = random_buffer(rng, 16, 3, 0.2);
  compute_gae(b, 0.99, 0.0);
  for (std::size_t n = 0; n < 3; ++n) {
    for (std::size_t t = 0; t < 16; ++t) {
      const std::size_t i = b.index(t, n);
      const double next = t + 1 < 16 ? b.values[b.index(t + 1, n)] : b.bootstrap_values[n];
      const double delta = b.rewards[i] + 0.99 * (b.dones[i] ? 0.0 : next) - b.values[i];
      EXPECT_NEAR((*b.advantages)[i], delta, 1e-12);
    }
  }
}

class GaeOracle : public ::testing::TestWithParam<std::tuple<double, double>> {};

TEST_P(GaeOracle, MatchesDoubleSum) {
  const auto [gamma, lambda] = GetParam();
  Rng rng(static_cast<std::uint64_t>(gamma * 1000 + lambda * 10));
  for (int trial = 0; trial < 5; ++trial) {
    RolloutBuffer b = random_buffer(rng, 64, 4, 0.05);
    const auto expected = gae_double_sum(b, gamma, lambda);
    compute_gae(b, gamma, lambda);
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR((*b.advantages)[i], expected[i], 1e-10);
  }
}

INSTANTIATE_TEST_SUITE_P(Grid, GaeOracle,
                         ::testing::Combine(::testing::Values(0.0, 0.5, 0.95, 1.0),
                                            ::testing::Values(0.0, 0.5, 0.999)));

TEST(Gae, DoneCutsLaterData) {
  Rng rng(4);
  RolloutBuffer a = random_buffer(rng, 20, 1, 0.0);
  const std::size_t k = 8;
  a.dones[k] = 1;
  RolloutBuffer b = a;
  for (std::size_t t = k + 1; t < 20; ++t) {
    b.rewards[t] = rng.normal() * 50;
    b.values[t] = rng.normal() * 50;
    b.dones[t] = rng.uniform() < 0.5;
  }
  b.bootstrap_values[0] = -77.0;
  compute_gae(a, 0.99, 0.95);
  compute_gae(b, 0.99, 0.95);
  for (std::size_t t = 0; t <= k; ++t) EXPECT_DOUBLE_EQ((*a.advantages)[t], (*b.advantages)[t]);
}

TEST(ValueTargets, RequireGae) {
  Rng rng(2);
  RolloutBuffer b = random_buffer(rng, 4, 2, 0.1);
  EXPECT_THROW(compute_value_targets(b), UsageError);
  compute_gae(b, 0.99, 0.95);
  const auto& targets = compute_value_targets(b);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_DOUBLE_EQ(targets[i], (*b.advantages)[i] + b.values[i]);
  }
}

TEST(ValueTargets, ZeroRewardZeroValue) {
  RolloutBuffer b(8, 2, 1);
  compute_gae(b, 0.999, 0.95);
  for (const double v : compute_value_targets(b)) EXPECT_EQ(v, 0.0);
}

TEST(ValueTargets, LambdaOneRecoversMonteCarlo) {
  Rng rng(6);
  for (const double gamma : {0.9, 0.999, 1.0}) {
    RolloutBuffer b = random_buffer(rng, 30, 2, 0.0);
    // Two complete episodes per column.
    for (std::size_t n = 0; n < 2; ++n) {
      b.dones[b.index(11, n)] = 1;
      b.dones[b.index(29, n)] = 1;
    }
    compute_gae(b, gamma, 1.0);
    const auto gae = compute_value_targets(b, ValueTarget::kGae, gamma);
    for (std::size_t n = 0; n < 2; ++n) {
      std::vector<double> r;
      std::vector<std::uint8_t> d;
      for (std::size_t t = 0; t < 30; ++t) {
        r.push_back(b.rewards[b.index(t, n)]);
        d.push_back(b.dones[b.index(t, n)]);
      }
      const auto mc = monte_carlo_return(r, d, gamma);
      ASSERT_TRUE(mc.all_complete());
      for (std::size_t t = 0; t < 30; ++t) EXPECT_NEAR(gae[b.index(t, n)], mc.returns[t], 1e-10);
    }
  }
}

TEST(MonteCarlo, Examples) {
  const std::vector<double> r = {0.0, 0.0, 10.0};
  const std::vector<std::uint8_t> d = {0, 0, 1};
  const auto mc = monte_carlo_return(r, d, 0.999);
  EXPECT_NEAR(mc.returns[0], 9.980010, 1e-6);
  EXPECT_TRUE(mc.all_complete());
  const auto zero = monte_carlo_return(r, d, 0.0);
  EXPECT_EQ(zero.returns, r);
}

TEST(MonteCarlo, BruteForceAndTruncation) {
  Rng rng(9);
  std::vector<double> r(40);
  std::vector<std::uint8_t> d(40, 0);
  for (auto& x : r) x = rng.normal();
  d[14] = 1;
  const auto mc = monte_carlo_return(r, d, 0.97);
  for (std::size_t t = 0; t <= 14; ++t) {
    double s = 0.0;
    for (std::size_t k = t; k <= 14; ++k) s += std::pow(0.97, static_cast<double>(k - t)) * r[k];
    EXPECT_NEAR(mc.returns[t], s, 1e-12);
    EXPECT_TRUE(mc.complete[t]);
  }
  EXPECT_FALSE(mc.complete[20]);
  EXPECT_FALSE(mc.all_complete());
}

TEST(MonteCarloTargets, BootstrapTruncatedSegments) {
  RolloutBuffer b(3, 1, 1);
  b.rewards = {1.0, 2.0, 3.0};
  b.bootstrap_values[0] = 4.0;
  const double g = 0.5;
  const auto& t = compute_value_targets(b, ValueTarget::kMonteCarlo, g);
  EXPECT_NEAR(t[2], 3.0 + g * 4.0, 1e-12);
  EXPECT_NEAR(t[0], 1.0 + g * 2.0 + g * g * 3.0 + g * g * g * 4.0, 1e-12);
}

TEST(Normalizer, ZeroRewardsStayZero) {
  RunningRewardNormalizer norm(2, 0.99);
  for (int t = 0; t < 100; ++t) EXPECT_EQ(norm.normalize(t % 2, 0.0, false), 0.0);
}

TEST(Normalizer, ConstantRewardsReachUnitScale) {
  // Scaled return std approaches 1 once the running statistic settles.
  RunningRewardNormalizer norm(1, 0.99);
  RunningStat scaled_returns;
  double ret = 0.0;
  for (int t = 0; t < 20000; ++t) {
    const bool done = (t + 1) % 100 == 0;
    const double s = norm.normalize(0, 1.0, done);
    ret = 0.99 * ret + s;
    if (t >= 10000) scaled_returns.push(ret);
    if (done) ret = 0.0;
  }
  EXPECT_LT(std::abs(scaled_returns.std() - 1.0), 0.1);
}

TEST(Normalizer, CountMonotoneAndClip) {
  RunningRewardNormalizer norm(1, 0.99, 2.0);
  double last = 0.0;
  for (int t = 0; t < 50; ++t) {
    const double s = norm.normalize(0, t == 40 ? 1000.0 : 0.01, false);
    EXPECT_LE(std::abs(s), 2.0);
    EXPECT_GT(norm.stat().count, last);
    last = norm.stat().count;
  }
}

TEST(Normalizer, WelfordMatchesDirect) {
  RunningStat s;
  const std::vector<double> x = {1, 4, 2, 8, 5};
  for (const double v : x) s.push(v);
  EXPECT_DOUBLE_EQ(s.mean, 4.0);
  EXPECT_NEAR(s.variance(), 6.0, 1e-12);
  RunningStat one;
  one.push(3.0);
  EXPECT_EQ(one.std(), 1.0);
}

TEST(Minibatch, PartitionProperty) {
  Rng rng(3);
  const auto sets = minibatches(96, 8, rng);
  ASSERT_EQ(sets.size(), 8u);
  std::set<std::size_t> all;
  for (const auto& s : sets) {
    EXPECT_EQ(s.size(), 12u);
    all.insert(s.begin(), s.end());
  }
  EXPECT_EQ(all.size(), 96u);
  EXPECT_EQ(*all.rbegin(), 95u);
}

TEST(Minibatch, SingleSetAndDeterminism) {
  Rng a(5), b(5);
  const auto one = minibatches(10, 1, a);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].size(), 10u);
  Rng c(5);
  EXPECT_EQ(minibatches(40, 4, b), minibatches(40, 4, c));
  EXPECT_THROW(minibatches(10, 3, a), ConfigError);
}

class CollectTest : public ::testing::Test {
 protected:
  envs::FamilyParams params;
  algos::Agent agent{algos::Algorithm::kDaac, params.observation_size(), envs::kActionCount, 16, 3};
};

TEST_F(CollectTest, SingleCell) {
  envs::VecEnv env(params, envs::train_seeds(2), 1);
  Rng rng(1);
  const RolloutBuffer b = collect_rollout(agent, env, 1, rng, nullptr);
  EXPECT_EQ(b.size(), 1u);
  EXPECT_EQ(b.bootstrap_values.size(), 1u);
  EXPECT_FALSE(b.advantages.has_value());
}

TEST_F(CollectTest, RepeatableAndLogProbsRecompute) {
  auto run = [&] {
    envs::VecEnv env(params, envs::train_seeds(4), 3);
    Rng rng(11);
    return collect_rollout(agent, env, 40, rng, nullptr);
  };
  const RolloutBuffer a = run(), b = run();
  EXPECT_EQ(a.actions, b.actions);
  EXPECT_EQ(a.observations, b.observations);
  EXPECT_EQ(a.log_probs, b.log_probs);

  const algos::Prediction pred = agent.predict(a.observations, a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::span<const double> probs(pred.probabilities.data() + i * envs::kActionCount,
                                        envs::kActionCount);
    EXPECT_NEAR(a.log_probs[i], diff::log_prob(probs, a.actions[i]), 1e-12);
    EXPECT_NEAR(a.values[i], pred.values[i], 1e-12);
    EXPECT_EQ(a.rewards[i], a.raw_rewards[i]);
  }
}

TEST_F(CollectTest, NormalizerScalesLearningRewardOnly) {
  envs::VecEnv env(params, envs::train_seeds(4), 4);
  Rng rng(2);
  RunningRewardNormalizer norm(4, 0.999);
  const RolloutBuffer b = collect_rollout(agent, env, 64, rng, &norm);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_TRUE(b.raw_rewards[i] == 0.0 || b.raw_rewards[i] == 10.0 || b.raw_rewards[i] == -1.0);
    if (b.raw_rewards[i] == 0.0) EXPECT_EQ(b.rewards[i], 0.0);
    if (b.raw_rewards[i] != 0.0) EXPECT_GT(b.rewards[i] * b.raw_rewards[i], 0.0);
  }
  EXPECT_EQ(norm.stat().count, 256.0);
}

}  // namespace
}  // namespace daaclab::rollout
