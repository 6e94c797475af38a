#include "daaclab/analysis/diagnostics.hpp"

#include <cmath>

#include "daaclab/common/error.hpp"
#include "daaclab/common/rng.hpp"
#include "daaclab/diffcore/distributions.hpp"
#include "daaclab/envs/env.hpp"
#include "daaclab/envs/vec_env.hpp"
#include "daaclab/rollout/collect.hpp"
#include "daaclab/common/hash.hpp"

namespace daaclab::analysis {

TraceReport trace_episode(const algos::Agent& agent, const envs::FamilyParams& params,
                          const envs::LevelSpec& level, double gamma) {
  TraceReport report;
  report.seed = level.seed;
  envs::LevelState state = envs::start(level);
  std::vector<double> obs = envs::observe(level, params, 0, 0);
  while (!state.done) {
    const algos::Prediction p = agent.predict(obs, 1);
    TraceStep s;
    s.t = state.step;
    s.position = state.position;
    s.action = diff::argmax(p.logits);
    s.value = p.values[0];
    if (!p.advantages.empty()) {
      report.has_advantage = true;
      s.advantage = p.advantages[s.action];
    }
    try {
      s.oracle_value = envs::oracle_value(level, params, state.position, gamma, state.step);
    } catch (const DomainError&) {
      s.oracle_value = 0.0;
    }
    report.steps.push_back(s);
    const envs::StepResult r = envs::step(state, params, s.action);
    obs = r.observation;
  }
  if (report.steps.size() >= 2) {
    std::vector<double> t, v, a;
    for (const TraceStep& s : report.steps) {
      t.push_back(s.t);
      v.push_back(s.value);
      a.push_back(s.advantage);
    }
    report.value_fit = linear_fit(t, v);
    if (report.has_advantage) report.advantage_fit = linear_fit(t, a);
  }
  return report;
}

double initial_value_variance(const algos::Agent& agent, const envs::FamilyParams& params,
                              const std::vector<std::int64_t>& seeds) {
  if (seeds.empty()) return 0.0;
  std::vector<double> obs;
  for (const std::int64_t seed : seeds) {
    const auto first = envs::reset(envs::generate_level(seed, params), params);
    obs.insert(obs.end(), first.begin(), first.end());
  }
  const algos::Prediction p = agent.predict(obs, seeds.size());
  return stddev(p.values);
}

VariantFn background_variants(const envs::FamilyParams& params) {
  return [params](const envs::LevelSpec& level, std::size_t k) {
    return envs::background_variant(level, params, k);
  };
}

PredictionKind prediction_kind(const algos::Agent& agent) {
  const algos::PolicyLayout& layout = agent.policy().layout();
  if (layout.aux == algos::AuxHead::kAdvantage) return PredictionKind::kAdvantage;
  if (layout.aux == algos::AuxHead::kValue) return PredictionKind::kAuxValue;
  return PredictionKind::kValue;
}

namespace {

MeanStd summarize(const std::vector<double>& x) { return {mean(x), stddev(x)}; }

// A decoupled critic exposes values too; kValue only applies to shared heads.
double policy_prediction(const algos::Prediction& p,
                         PredictionKind kind, std::size_t row, std::size_t action) {
  switch (kind) {
    case PredictionKind::kAdvantage:
      return p.advantages[row * p.action_count + action];
    case PredictionKind::kAuxValue:
      return p.aux_values[row];
    case PredictionKind::kValue:
      break;
  }
  return p.values[row];
}

}  // namespace

RobustnessReport background_swap_robustness(const algos::Agent& agent,
                                            const envs::FamilyParams& params,
                                            const std::vector<ObservationSample>& samples,
                                            std::size_t variants, const VariantFn& variant) {
  if (samples.empty()) throw DomainError("robustness: empty observation set");
  if (variants == 0) throw DomainError("robustness: K must be >= 1");
  const std::size_t n = samples.size();
  const std::size_t obs_size = params.observation_size();
  const std::size_t b_offset = obs_size - static_cast<std::size_t>(params.background_dim);
  const PredictionKind kind = prediction_kind(agent);

  std::vector<double> originals;
  originals.reserve(n * obs_size);
  for (const ObservationSample& s : samples) {
    if (s.observation.size() != obs_size) {
      throw DimensionError("robustness: observation of the wrong size");
    }
    originals.insert(originals.end(), s.observation.begin(), s.observation.end());
  }
  const algos::Prediction base = agent.predict(originals, n);
  const std::size_t f = base.features.size() / n;
  const std::size_t a = base.action_count;
  std::vector<std::size_t> greedy(n);
  for (std::size_t i = 0; i < n; ++i) {
    greedy[i] = diff::argmax(std::span<const double>(base.logits).subspan(i * a, a));
  }

  RobustnessReport report;
  report.l1.assign(n, 0.0);
  report.l2.assign(n, 0.0);
  report.prediction.assign(n, 0.0);
  report.jsd.assign(n, 0.0);
  std::vector<double> swapped = originals;
  for (std::size_t k = 1; k <= variants; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> b = variant(*samples[i].level, k);
      if (b.size() != obs_size - b_offset) {
        throw DimensionError("robustness: variant background of the wrong size");
      }
      std::copy(b.begin(), b.end(),
                swapped.begin() + static_cast<std::ptrdiff_t>(i * obs_size + b_offset));
    }
    const algos::Prediction p = agent.predict(swapped, n);
    for (std::size_t i = 0; i < n; ++i) {
      double l1 = 0.0, l2 = 0.0;
      for (std::size_t j = 0; j < f; ++j) {
        const double d = p.features[i * f + j] - base.features[i * f + j];
        l1 += std::abs(d);
        l2 += d * d;
      }
      report.l1[i] += l1;
      report.l2[i] += std::sqrt(l2);
      report.prediction[i] += std::abs(policy_prediction(p, kind, i, greedy[i]) -
                                       policy_prediction(base, kind, i, greedy[i]));
      report.jsd[i] += jsd(std::span<const double>(base.probabilities).subspan(i * a, a),
                           std::span<const double>(p.probabilities).subspan(i * a, a));
    }
  }
  const double inv = 1.0 / static_cast<double>(variants);
  for (std::size_t i = 0; i < n; ++i) {
    report.l1[i] *= inv;
    report.l2[i] *= inv;
    report.prediction[i] *= inv;
    report.jsd[i] *= inv;
  }
  report.l1_summary = summarize(report.l1);
  report.l2_summary = summarize(report.l2);
  report.prediction_summary = summarize(report.prediction);
  report.jsd_summary = summarize(report.jsd);
  return report;
}

std::vector<ObservationSample> sample_observations(const std::vector<envs::LevelSpec>& levels,
                                                   const envs::FamilyParams& params,
                                                   std::size_t per_level, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ObservationSample> out;
  out.reserve(levels.size() * per_level);
  for (const envs::LevelSpec& level : levels) {
    envs::LevelState state = envs::start(level);
    std::vector<double> obs = envs::observe(level, params, 0, 0);
    for (std::size_t k = 0; k < per_level; ++k) {
      out.push_back({&level, obs});
      const envs::StepResult r =
          envs::step(state, params, rng.uniform_index(envs::kActionCount));
      if (r.done) {
        state = envs::start(level);
        obs = envs::observe(level, params, 0, 0);
      } else {
        obs = r.observation;
      }
    }
  }
  return out;
}

std::vector<double> policy_features(const algos::Agent& agent,
                                    const rollout::RolloutBuffer& buffer) {
  return agent.predict(buffer.observations, buffer.size()).features;
}

invariance::ProbeResult order_probe(const algos::Agent& agent, const envs::FamilyParams& params,
                                    const std::vector<std::int64_t>& fit_seeds,
                                    const std::vector<std::int64_t>& heldout_seeds,
                                    std::size_t num_envs, std::size_t num_steps,
                                    const invariance::ProbeOptions& options) {
  if (fit_seeds.empty() || heldout_seeds.empty()) {
    throw DomainError("order_probe: empty seed pool");
  }
  auto rollout = [&](const std::vector<std::int64_t>& seeds, std::uint64_t tag) {
    envs::VecEnv envs(params, seeds, num_envs);
    Rng rng(hash_combine(options.seed, tag));
    return rollout::collect_rollout(agent, envs, num_steps, rng, nullptr);
  };
  const rollout::RolloutBuffer fit = rollout(fit_seeds, 101);
  const rollout::RolloutBuffer heldout = rollout(heldout_seeds, 102);
  const std::vector<double> fit_features = policy_features(agent, fit);
  const std::vector<double> heldout_features = policy_features(agent, heldout);
  const std::size_t width = agent.policy().layout().hidden;
  return invariance::train_order_probe({&fit, fit_features, width},
                                       {&heldout, heldout_features, width}, options);
}

}  // namespace daaclab::analysis
