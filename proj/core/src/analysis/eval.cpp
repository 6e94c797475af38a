#include "daaclab/analysis/eval.hpp"

#include <cmath>
#include <map>

#include "daaclab/analysis/stats.hpp"
#include "daaclab/common/error.hpp"
#include "daaclab/common/rng.hpp"
#include "daaclab/diffcore/distributions.hpp"
#include "daaclab/envs/env.hpp"

namespace daaclab::analysis {

EvalReport make_report(std::string pool, std::vector<double> returns) {
  EvalReport r;
  r.pool = std::move(pool);
  r.episodes = returns.size();
  r.mean = mean(returns);
  r.std = stddev(returns);
  r.returns = std::move(returns);
  return r;
}

namespace {

// Plays one episode per level in lockstep; `choose` maps a batch of
// observations to actions.
template <typename Choose>
std::vector<double> play(const std::vector<envs::LevelSpec>& levels,
                         const envs::FamilyParams& params, Choose&& choose) {
  const std::size_t n = levels.size();
  const std::size_t obs_size = params.observation_size();
  std::vector<envs::LevelState> states;
  std::vector<double> returns(n, 0.0);
  std::vector<double> obs(n * obs_size);
  states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    states.push_back(envs::start(levels[i]));
    envs::observe_into(levels[i], params, 0, 0,
                       std::span<double>(obs).subspan(i * obs_size, obs_size));
  }
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;
  std::vector<double> batch;
  while (!active.empty()) {
    batch.clear();
    for (const std::size_t i : active) {
      batch.insert(batch.end(), obs.begin() + static_cast<std::ptrdiff_t>(i * obs_size),
                   obs.begin() + static_cast<std::ptrdiff_t>((i + 1) * obs_size));
    }
    const std::vector<std::size_t> actions = choose(batch, active.size());
    std::vector<std::size_t> still;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const std::size_t i = active[k];
      const envs::StepResult r = envs::step(states[i], params, actions[k]);
      returns[i] += r.reward;
      if (r.done) continue;
      std::copy(r.observation.begin(), r.observation.end(),
                obs.begin() + static_cast<std::ptrdiff_t>(i * obs_size));
      still.push_back(i);
    }
    active.swap(still);
  }
  return returns;
}

std::vector<envs::LevelSpec> levels_for(const envs::FamilyParams& params,
                                        const std::vector<std::int64_t>& seeds,
                                        std::size_t count) {
  std::vector<envs::LevelSpec> levels;
  levels.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    levels.push_back(envs::generate_level(seeds[k % seeds.size()], params));
  }
  return levels;
}

void check_protocol(const std::vector<std::int64_t>& seeds, std::size_t episodes) {
  if (episodes == 0) throw DomainError("evaluate: K must be >= 1");
  if (seeds.empty()) throw DomainError("evaluate: empty seed pool");
}

}  // namespace

EvalReport evaluate(const rollout::BehaviorModel& model, const envs::FamilyParams& params,
                    const std::vector<std::int64_t>& seeds, std::size_t episodes,
                    std::string pool) {
  check_protocol(seeds, episodes);
  // Greedy play is deterministic per level, so each distinct pool entry is
  // played once and its return reused for every cycle.
  const std::size_t distinct = std::min(episodes, seeds.size());
  const auto levels = levels_for(params, seeds, distinct);
  std::vector<double> logits, values;
  const std::size_t a = model.action_count();
  const std::vector<double> once =
      play(levels, params, [&](const std::vector<double>& obs, std::size_t rows) {
        model.evaluate(obs, rows, logits, values);
        std::vector<std::size_t> actions(rows);
        for (std::size_t r = 0; r < rows; ++r) {
          actions[r] = diff::argmax(std::span<const double>(logits).subspan(r * a, a));
        }
        return actions;
      });
  std::vector<double> returns(episodes);
  for (std::size_t k = 0; k < episodes; ++k) returns[k] = once[k % distinct];
  return make_report(std::move(pool), std::move(returns));
}

EvalReport evaluate_random(const envs::FamilyParams& params,
                           const std::vector<std::int64_t>& seeds, std::size_t episodes,
                           std::uint64_t seed, std::string pool) {
  check_protocol(seeds, episodes);
  Rng rng(seed);
  const auto levels = levels_for(params, seeds, episodes);
  std::vector<double> returns =
      play(levels, params, [&](const std::vector<double>&, std::size_t rows) {
        std::vector<std::size_t> actions(rows);
        for (auto& action : actions) action = rng.uniform_index(envs::kActionCount);
        return actions;
      });
  return make_report(std::move(pool), std::move(returns));
}

double generalization_gap(const EvalReport& train, const EvalReport& test) {
  return train.mean - test.mean;
}

double ppo_normalized_score(const EvalReport& method, const EvalReport& ppo,
                            const EvalReport& random) {
  const double denom = ppo.mean - random.mean;
  if (std::abs(denom) < 1e-12) {
    throw DomainError("ppo_normalized_score: PPO and random baselines coincide");
  }
  return 100.0 * (method.mean - random.mean) / denom;
}

}  // namespace daaclab::analysis
