#ifndef DAACLAB_ANALYSIS_EVAL_HPP_
#define DAACLAB_ANALYSIS_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "daaclab/envs/family.hpp"
#include "daaclab/rollout/collect.hpp"

namespace daaclab::analysis {

struct EvalReport {
  std::string pool;
  std::size_t episodes = 0;
  double mean = 0.0;
  // Population std of the episode returns.
  double std = 0.0;
  std::vector<double> returns;
};

// Summary statistics recomputed from `returns`.
EvalReport make_report(std::string pool, std::vector<double> returns);

// K greedy (argmax, lowest index on ties) episodes; episode k plays
// seeds[k mod P]. Returns are undiscounted reward sums.
EvalReport evaluate(const rollout::BehaviorModel& model, const envs::FamilyParams& params,
                    const std::vector<std::int64_t>& seeds, std::size_t episodes,
                    std::string pool = "test");

// Uniform-random actions from Rng(seed); same episode protocol.
EvalReport evaluate_random(const envs::FamilyParams& params,
                           const std::vector<std::int64_t>& seeds, std::size_t episodes,
                           std::uint64_t seed, std::string pool = "test");

// train mean - test mean.
double generalization_gap(const EvalReport& train, const EvalReport& test);

// 100 (method - random) / (ppo - random). Throws DomainError when the PPO and
// random means coincide.
double ppo_normalized_score(const EvalReport& method, const EvalReport& ppo,
                            const EvalReport& random);

}  // namespace daaclab::analysis

#endif  // DAACLAB_ANALYSIS_EVAL_HPP_
