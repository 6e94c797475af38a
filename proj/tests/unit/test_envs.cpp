#include <gtest/gtest.h>

#include <cmath>

#include "daaclab/common/error.hpp"
#include "daaclab/common/rng.hpp"
#include "daaclab/envs/env.hpp"
#include "daaclab/envs/family.hpp"
#include "daaclab/envs/level.hpp"
#include "daaclab/envs/vec_env.hpp"

namespace daaclab::envs {
namespace {

// Frozen output of the seed-1 expansion with default parameters.
constexpr int kGoldenLength = 26;
constexpr const char* kGoldenDump =
    "1\t26\t9,11,12,13,17,18\t"
    "0.462664,0.511872,0.540821,0.637905,0.514721,0.485438,0.538114,0.474472";

FamilyParams hazard_free(int lo = 8, int hi = 48) {
  FamilyParams p;
  p.hazard_density = 0.0;
  p.min_length = lo;
  p.max_length = hi;
  return p;
}

TEST(Level, Deterministic) {
  const FamilyParams p;
  for (std::int64_t seed = 1; seed <= 50; ++seed) {
    EXPECT_EQ(generate_level(seed, p), generate_level(seed, p));
  }
}

TEST(Level, DegenerateLengthRange) {
  const FamilyParams p = hazard_free(20, 20);
  for (std::int64_t seed = 1; seed <= 30; ++seed) EXPECT_EQ(generate_level(seed, p).length, 20);
}

TEST(Level, GoldenSeedOne) {
  const LevelSpec l = generate_level(1, FamilyParams{});
  EXPECT_EQ(l.length, kGoldenLength);
  EXPECT_EQ(level_dump_line(l), kGoldenDump);
}

TEST(Level, RejectsNonPositiveSeed) {
  EXPECT_THROW(generate_level(0, FamilyParams{}), DomainError);
  EXPECT_THROW(generate_level(-3, FamilyParams{}), DomainError);
}

TEST(Level, LengthsCoverRange) {
  const FamilyParams p;
  int lo = 1000, hi = 0;
  for (std::int64_t seed = 1; seed <= 2000; ++seed) {
    const int len = generate_level(seed, p).length;
    ASSERT_GE(len, p.min_length);
    ASSERT_LE(len, p.max_length);
    lo = std::min(lo, len);
    hi = std::max(hi, len);
  }
  EXPECT_EQ(lo, p.min_length);
  EXPECT_EQ(hi, p.max_length);
}

TEST(Level, HazardsAvoidStartAndGoal) {
  const FamilyParams p;
  for (std::int64_t seed = 1; seed <= 200; ++seed) {
    const LevelSpec l = generate_level(seed, p);
    ASSERT_EQ(l.hazards.size(), l.hazard_phases.size());
    for (const int h : l.hazards) {
      EXPECT_GT(h, 0);
      EXPECT_LT(h, l.goal());
    }
  }
}

TEST(Level, GapsNeverAdjacent) {
  FamilyParams p;
  p.family = Family::kGapworld;
  for (std::int64_t seed = 1; seed <= 200; ++seed) {
    const LevelSpec l = generate_level(seed, p);
    for (std::size_t i = 1; i < l.hazards.size(); ++i) EXPECT_GT(l.hazards[i] - l.hazards[i - 1], 1);
  }
}

TEST(Level, CoupledBackgroundTracksLength) {
  // Even coordinates rise with length, odd ones fall.
  const FamilyParams p;
  const LevelSpec* short_level = nullptr;
  const LevelSpec* long_level = nullptr;
  std::vector<LevelSpec> levels;
  for (std::int64_t seed = 1; seed <= 400; ++seed) levels.push_back(generate_level(seed, p));
  for (const auto& l : levels) {
    if (l.length == p.min_length && !short_level) short_level = &l;
    if (l.length == p.max_length && !long_level) long_level = &l;
  }
  ASSERT_TRUE(short_level && long_level);
  EXPECT_GT(long_level->background[0], short_level->background[0]);
  EXPECT_LT(long_level->background[1], short_level->background[1]);
}

TEST(Reset, RepeatableAndGoalVisibility) {
  const FamilyParams p = hazard_free(3, 3);
  const LevelSpec l = generate_level(5, p);
  EXPECT_EQ(reset(l, p), reset(l, p));
  const auto obs = reset(l, p);
  // L = 3 puts the goal two cells right of the start, the window edge.
  const std::size_t cell = static_cast<std::size_t>(p.window + 2);
  EXPECT_EQ(obs[cell * kChannels + kGoalChannel], 1.0);
  ASSERT_EQ(obs.size(), p.observation_size());
}

TEST(Reset, UncoupledLevelsDifferOnlyInBackground) {
  FamilyParams p = hazard_free();
  p.coupled = false;
  const std::size_t window = kChannels * p.window_cells();
  int checked = 0;
  const LevelSpec a = generate_level(1, p);
  for (std::int64_t seed = 2; seed <= 50; ++seed) {
    const LevelSpec b = generate_level(seed, p);
    if (b.length == a.length) continue;
    const auto oa = reset(a, p), ob = reset(b, p);
    for (std::size_t i = 0; i < window; ++i) EXPECT_EQ(oa[i], ob[i]);
    bool differs = false;
    for (std::size_t i = window; i < oa.size(); ++i) differs |= oa[i] != ob[i];
    EXPECT_TRUE(differs);
    ++checked;
  }
  EXPECT_GT(checked, 10);
}

TEST(Step, ShortCorridorRight) {
  const FamilyParams p = hazard_free(2, 2);
  const LevelSpec l = generate_level(1, p);
  LevelState s = start(l);
  const StepResult r = step(s, p, corridor::kRight);
  EXPECT_EQ(r.reward, 10.0);
  EXPECT_TRUE(r.done);
  EXPECT_EQ(r.step, 1);
  EXPECT_THROW(step(s, p, corridor::kRight), UsageError);
}

TEST(Step, NoopUntilHorizon) {
  const FamilyParams p;
  const LevelSpec l = generate_level(3, p);
  LevelState s = start(l);
  double total = 0.0;
  int steps = 0;
  StepResult r;
  do {
    r = step(s, p, corridor::kNoop);
    total += r.reward;
    ++steps;
  } while (!r.done);
  EXPECT_EQ(steps, p.max_steps);
  EXPECT_EQ(total, 0.0);
}

TEST(Step, InvalidAction) {
  const FamilyParams p;
  const LevelSpec l = generate_level(3, p);
  LevelState s = start(l);
  EXPECT_THROW(step(s, p, 3), DomainError);
}

TEST(Step, RewardsAreFromTheFixedSet) {
  FamilyParams p;
  p.hazard_period = 1;
  Rng rng(8);
  int hazard_deaths = 0;
  for (std::int64_t seed = 1; seed <= 60; ++seed) {
    const LevelSpec l = generate_level(seed, p);
    LevelState s = start(l);
    StepResult r;
    do {
      r = step(s, p, rng.uniform_index(kActionCount));
      EXPECT_TRUE(r.reward == 0.0 || r.reward == p.goal_reward || r.reward == p.hazard_penalty);
      if (r.done) EXPECT_TRUE(r.reward != 0.0 || r.step == p.max_steps);
    } while (!r.done);
    hazard_deaths += r.reward == p.hazard_penalty;
  }
  EXPECT_GT(hazard_deaths, 0);
}

TEST(Step, GapworldJumpAndFall) {
  FamilyParams p;
  p.family = Family::kGapworld;
  std::int64_t seed = 1;
  LevelSpec l;
  for (;; ++seed) {
    l = generate_level(seed, p);
    if (!l.hazards.empty()) break;
  }
  const int gap = l.hazards.front();
  LevelState walk = start(l);
  StepResult r;
  for (int c = 0; c < gap; ++c) r = step(walk, p, gapworld::kRight);
  EXPECT_TRUE(r.done);
  EXPECT_EQ(r.reward, p.hazard_penalty);

  LevelState jump = start(l);
  for (int c = 0; c < gap - 1; ++c) r = step(jump, p, gapworld::kRight);
  EXPECT_FALSE(r.done);
  r = step(jump, p, gapworld::kJump);
  EXPECT_EQ(jump.position, gap + 1);
}

TEST(Step, ReplayIsBitIdentical) {
  const FamilyParams p;
  const LevelSpec l = generate_level(17, p);
  Rng rng(2);
  std::vector<std::size_t> actions(20);
  for (auto& a : actions) a = rng.uniform_index(kActionCount);
  auto play = [&] {
    std::vector<StepResult> out;
    LevelState s = start(l);
    for (const auto a : actions) {
      if (s.done) break;
      out.push_back(step(s, p, a));
    }
    return out;
  };
  const auto a = play(), b = play();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].observation, b[i].observation);
    EXPECT_EQ(a[i].reward, b[i].reward);
    EXPECT_EQ(a[i].done, b[i].done);
  }
}

TEST(VecEnv, TransitionCount) {
  VecEnv env(FamilyParams{}, train_seeds(200), 64);
  Rng rng(1);
  std::size_t transitions = 0;
  std::vector<std::size_t> actions(64);
  for (int t = 0; t < 256; ++t) {
    for (auto& a : actions) a = rng.uniform_index(kActionCount);
    transitions += env.step(actions).size();
  }
  EXPECT_EQ(transitions, 16384u);
  const std::vector<std::size_t> wrong(63, 0);
  EXPECT_THROW(env.step(wrong), DimensionError);
}

TEST(VecEnv, SingleEnvMatchesStepAndReset) {
  const FamilyParams p;
  const auto pool = train_seeds(3);
  VecEnv env(p, pool, 1);
  std::size_t cursor = 0;
  LevelSpec level = generate_level(pool[cursor], p);
  LevelState s = start(level);
  Rng rng(5);
  for (int t = 0; t < 400; ++t) {
    const std::size_t a = rng.uniform_index(kActionCount);
    const StepResult direct = step(s, p, a);
    const StepResult vec = env.step(std::span<const std::size_t>(&a, 1)).front();
    EXPECT_EQ(direct.reward, vec.reward);
    EXPECT_EQ(direct.done, vec.done);
    EXPECT_EQ(direct.seed, vec.seed);
    if (direct.done) {
      cursor = (cursor + 1) % pool.size();
      level = generate_level(pool[cursor], p);
      s = start(level);
      EXPECT_EQ(vec.observation, reset(level, p));
    } else {
      EXPECT_EQ(vec.observation, direct.observation);
    }
  }
}

TEST(VecEnv, SimultaneousDoneAdvancesEverySeed) {
  const FamilyParams p = hazard_free(2, 2);
  VecEnv env(p, train_seeds(8), 4);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(env.current_seed(i), static_cast<std::int64_t>(i + 1));
  const std::vector<std::size_t> right(4, corridor::kRight);
  const auto results = env.step(right);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_TRUE(results[i].done);
    EXPECT_EQ(env.current_seed(i), static_cast<std::int64_t>(i + 2));
  }
  EXPECT_EQ(env.take_completed_returns().size(), 4u);
  EXPECT_TRUE(env.take_completed_returns().empty());
}

TEST(VecEnv, SnapshotRestore) {
  VecEnv env(FamilyParams{}, train_seeds(10), 8);
  Rng rng(3);
  std::vector<std::size_t> actions(8);
  auto advance = [&](int n) {
    std::vector<double> trace;
    for (int t = 0; t < n; ++t) {
      for (auto& a : actions) a = rng.uniform_index(kActionCount);
      for (const auto& r : env.step(actions)) trace.push_back(r.reward + r.observation.front());
    }
    return trace;
  };
  advance(30);
  const auto snap = env.snapshot();
  const Rng saved = rng;
  const auto first = advance(50);
  env.restore(snap);
  rng = saved;
  EXPECT_EQ(advance(50), first);
}

TEST(Seeds, Pools) {
  EXPECT_EQ(train_seeds(3), (std::vector<std::int64_t>{1, 2, 3}));
  EXPECT_EQ(test_seeds(2), (std::vector<std::int64_t>{10001, 10002}));
}

TEST(Oracle, ClosedFormValue) {
  const FamilyParams p = hazard_free(25, 25);
  const LevelSpec l = generate_level(1, p);
  EXPECT_NEAR(oracle_value(l, p, 0, 0.999), 10.0 * std::pow(0.999, 23), 1e-12);
  EXPECT_NEAR(oracle_value(l, p, 0, 0.999), 9.77251, 1e-5);
  EXPECT_EQ(oracle_value(l, p, l.goal() - 1, 0.999), 10.0);
  EXPECT_EQ(oracle_value(l, p, l.goal(), 0.999), 0.0);
}

TEST(Oracle, MonotoneInLength) {
  const FamilyParams pa = hazard_free(10, 10), pb = hazard_free(30, 30);
  const LevelSpec a = generate_level(1, pa);
  const LevelSpec b = generate_level(1, pb);
  EXPECT_GT(oracle_value(a, pa, 0, 0.99), oracle_value(b, pb, 0, 0.99));
}

TEST(Oracle, AsymmetryProperty) {
  // Same optimal first action, different start values when lengths differ.
  const FamilyParams p = hazard_free();
  for (std::int64_t s1 = 1; s1 <= 20; ++s1) {
    const LevelSpec a = generate_level(s1, p);
    const LevelSpec b = generate_level(s1 + 100, p);
    EXPECT_EQ(oracle_action(a, p, 0), corridor::kRight);
    EXPECT_EQ(oracle_action(b, p, 0), corridor::kRight);
    if (a.length != b.length) {
      EXPECT_NE(oracle_value(a, p, 0, 0.999), oracle_value(b, p, 0, 0.999));
    }
  }
}

TEST(Oracle, FollowingOracleActionsReachesGoal) {
  const FamilyParams p;
  for (std::int64_t seed = 1; seed <= 40; ++seed) {
    const LevelSpec l = generate_level(seed, p);
    int d = 0;
    try {
      d = oracle_steps_to_goal(l, p, 0);
    } catch (const DomainError&) {
      continue;
    }
    LevelState s = start(l);
    StepResult r;
    int steps = 0;
    do {
      r = step(s, p, oracle_action(l, p, s.position, s.step));
      ++steps;
    } while (!r.done);
    EXPECT_EQ(r.reward, p.goal_reward) << seed;
    EXPECT_EQ(steps, d) << seed;
  }
}

}  // namespace
}  // namespace daaclab::envs
