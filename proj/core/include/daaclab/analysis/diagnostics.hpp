#ifndef DAACLAB_ANALYSIS_DIAGNOSTICS_HPP_
#define DAACLAB_ANALYSIS_DIAGNOSTICS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "daaclab/algos/networks.hpp"
#include "daaclab/analysis/stats.hpp"
#include "daaclab/envs/level.hpp"
#include "daaclab/invariance/probe.hpp"
#include "daaclab/rollout/buffer.hpp"

namespace daaclab::analysis {

struct TraceStep {
  int t = 0;
  int position = 0;
  std::size_t action = 0;
  double value = 0.0;
  // Advantage head at the taken action; 0 without an advantage head.
  double advantage = 0.0;
  double oracle_value = 0.0;
};

struct TraceReport {
  std::int64_t seed = 0;
  std::vector<TraceStep> steps;
  bool has_advantage = false;
  LinearFit value_fit;
  LinearFit advantage_fit;
};

// One greedy episode on `level`, recording the critic (or shared value
// head) and the advantage head along the way. Fits are left at zero for
// episodes shorter than two steps.
TraceReport trace_episode(const algos::Agent& agent, const envs::FamilyParams& params,
                          const envs::LevelSpec& level, double gamma);

// Population std of V(reset observation) over the seeds.
double initial_value_variance(const algos::Agent& agent, const envs::FamilyParams& params,
                              const std::vector<std::int64_t>& seeds);

// An observation together with the level that produced it.
struct ObservationSample {
  const envs::LevelSpec* level = nullptr;
  std::vector<double> observation;
};

// Background for variant k (1-based) of an observation's level.
using VariantFn =
    std::function<std::vector<double>(const envs::LevelSpec&, std::size_t k)>;

// The default generator: background_variant(level, params, k).
VariantFn background_variants(const envs::FamilyParams& params);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

struct RobustnessReport {
  // Per observation, averaged over the K variants.
  std::vector<double> l1;
  std::vector<double> l2;
  std::vector<double> prediction;
  std::vector<double> jsd;
  MeanStd l1_summary;
  MeanStd l2_summary;
  MeanStd prediction_summary;
  MeanStd jsd_summary;
};

// What |delta prediction| reads: the advantage of the original greedy
// action for advantage-headed policies, DVAC's value head, or the shared
// value head. A decoupled critic is never used.
enum class PredictionKind { kValue, kAuxValue, kAdvantage };
PredictionKind prediction_kind(const algos::Agent& agent);

// Replaces only the background coordinates of each observation with K
// variants and measures feature L1/L2 drift, prediction drift and policy
// JSD. Throws DomainError on an empty set or K = 0.
RobustnessReport background_swap_robustness(const algos::Agent& agent,
                                            const envs::FamilyParams& params,
                                            const std::vector<ObservationSample>& samples,
                                            std::size_t variants, const VariantFn& variant);

// Observations visited by uniform-random play on the given levels,
// `per_level` observations each, deterministic in `seed`.
std::vector<ObservationSample> sample_observations(const std::vector<envs::LevelSpec>& levels,
                                                   const envs::FamilyParams& params,
                                                   std::size_t per_level, std::uint64_t seed);

// Policy-encoder features of every buffer cell, [buffer.size(), hidden].
std::vector<double> policy_features(const algos::Agent& agent,
                                    const rollout::RolloutBuffer& buffer);

// Temporal-order probe of the policy representation: rolls the agent's
// sampled policy for `num_steps` on each seed pool, trains a fresh
// discriminator on features from `fit_seeds` and scores it on `heldout_seeds`.
invariance::ProbeResult order_probe(const algos::Agent& agent, const envs::FamilyParams& params,
                                    const std::vector<std::int64_t>& fit_seeds,
                                    const std::vector<std::int64_t>& heldout_seeds,
                                    std::size_t num_envs, std::size_t num_steps,
                                    const invariance::ProbeOptions& options = {});

}  // namespace daaclab::analysis

#endif  // DAACLAB_ANALYSIS_DIAGNOSTICS_HPP_
