#include "daaclab/algos/trainer.hpp"

#include <chrono>

#include "daaclab/common/error.hpp"
#include "daaclab/common/format.hpp"
#include "daaclab/common/hash.hpp"
#include "daaclab/diffcore/ops.hpp"
#include "daaclab/invariance/pairs.hpp"
#include "daaclab/rollout/collect.hpp"
#include "daaclab/rollout/minibatch.hpp"
#include "daaclab/rollout/returns.hpp"

namespace daaclab::algos {

std::string log_header() {
  return "update,env_steps,mean_episode_return_train,policy_loss,value_loss,"
         "advantage_loss,encoder_loss,discriminator_loss,entropy,clip_fraction,"
         "wall_ms";
}

std::string format_log_row(const LogRow& r) {
  return join({std::to_string(r.update), std::to_string(r.env_steps),
               format_double(r.mean_episode_return_train),
               format_double(r.policy_loss), format_double(r.value_loss),
               format_double(r.advantage_loss), format_double(r.encoder_loss),
               format_double(r.discriminator_loss), format_double(r.entropy),
               format_double(r.clip_fraction), format_double(r.wall_ms)},
              ",");
}

LossBatch make_batch(const rollout::RolloutBuffer& buffer,
                     std::span<const std::size_t> cells) {
  if (!buffer.advantages || !buffer.targets) {
    throw UsageError("make_batch: advantages and targets must be computed first");
  }
  LossBatch b;
  b.rows = cells.size();
  b.observation_size = buffer.observation_size;
  b.observations.reserve(b.rows * b.observation_size);
  for (const std::size_t c : cells) {
    const auto obs = buffer.observation(c);
    b.observations.insert(b.observations.end(), obs.begin(), obs.end());
    b.actions.push_back(buffer.actions[c]);
    b.old_log_probs.push_back(buffer.log_probs[c]);
    b.advantages.push_back((*buffer.advantages)[c]);
    b.targets.push_back((*buffer.targets)[c]);
  }
  return b;
}

namespace {

std::vector<double> gather_observations(const rollout::RolloutBuffer& buffer,
                                        std::span<const std::size_t> cells) {
  std::vector<double> out;
  out.reserve(cells.size() * buffer.observation_size);
  for (const std::size_t c : cells) {
    const auto obs = buffer.observation(c);
    out.insert(out.end(), obs.begin(), obs.end());
  }
  return out;
}

diff::AdamOptions adam_options(const AlgoConfig& c) {
  diff::AdamOptions o;
  o.learning_rate = c.learning_rate;
  return o;
}

// Running mean of per-step statistics.
struct Mean {
  double sum = 0.0;
  int count = 0;
  void add(double x) {
    sum += x;
    ++count;
  }
  double value() const { return count == 0 ? 0.0 : sum / count; }
};

ExperimentConfig effective(ExperimentConfig config) {
  config.algo = effective_config(config.algo);
  return config;
}

}  // namespace

Trainer::Trainer(ExperimentConfig config, std::uint64_t seed)
    : config_(effective(std::move(config))),
      seed_(seed),
      envs_(config_.env, envs::train_seeds(static_cast<std::size_t>(config_.train_levels)),
            static_cast<std::size_t>(config_.algo.num_envs)),
      agent_(config_.algo.algorithm, config_.env.observation_size(), envs::kActionCount,
             static_cast<std::size_t>(config_.algo.hidden), seed),
      normalizer_(static_cast<std::size_t>(config_.algo.num_envs), config_.algo.gamma,
                  config_.algo.reward_clip),
      action_rng_(hash_combine(seed, kActionStream)),
      minibatch_rng_(hash_combine(seed, kMinibatchStream)),
      pair_rng_(hash_combine(seed, kPairStream)) {
  config_.validate();
  const diff::AdamOptions options = adam_options(config_.algo);
  policy_adam_ = diff::AdamState(agent_.policy().params(), options);
  if (agent_.has_critic()) critic_adam_ = diff::AdamState(agent_.critic().params(), options);
  if (config_.algo.algorithm == Algorithm::kIdaac) {
    Rng rng(hash_combine(seed, kDiscriminatorInitStream));
    discriminator_ = std::make_unique<invariance::Discriminator>(
        static_cast<std::size_t>(config_.algo.hidden),
        static_cast<std::size_t>(config_.algo.discriminator_hidden), rng);
    discriminator_adam_ = diff::AdamState(discriminator_->params(), options);
  }
}

double Trainer::clip_and_step(diff::ParameterStore& store, diff::AdamState& state) {
  diff::ParameterStore* stores[] = {&store};
  const double norm = diff::clip_grad_norm(stores, config_.algo.grad_clip);
  diff::adam_step(store, state);
  return norm;
}

LogRow Trainer::update() {
  const auto start = std::chrono::steady_clock::now();
  const AlgoConfig& a = config_.algo;
  rollout::RolloutBuffer buffer =
      rollout::collect_rollout(agent_, envs_, static_cast<std::size_t>(a.num_steps),
                               action_rng_, a.reward_norm ? &normalizer_ : nullptr);
  rollout::compute_gae(buffer, a.gamma, a.lambda);
  rollout::compute_value_targets(buffer, a.value_target, a.gamma);

  const std::vector<double> completed = envs_.take_completed_returns();
  if (!completed.empty()) {
    double total = 0.0;
    for (const double r : completed) total += r;
    last_return_ = total / static_cast<double>(completed.size());
  }

  LogRow row;
  row.mean_episode_return_train = last_return_;
  if (is_decoupled(a.algorithm)) {
    policy_phase(buffer, row);
    if (updates_done_ % a.value_freq == 0) {
      value_phase(buffer, row);
    } else {
      row.value_loss = last_value_loss_;
    }
  } else {
    shared_phase(buffer, row);
  }
  last_value_loss_ = row.value_loss;

  ++updates_done_;
  env_steps_ += a.batch_size();
  row.update = updates_done_;
  row.env_steps = env_steps_;
  if (config_.eval.wall_time) {
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  }
  last_rollout_ = std::move(buffer);
  log_.push_back(row);
  return row;
}

void Trainer::train(const std::function<void(const LogRow&)>& on_row) {
  while (!finished()) {
    const LogRow row = update();
    if (on_row) on_row(row);
  }
}

void Trainer::shared_phase(const rollout::RolloutBuffer& buffer, LogRow& row) {
  const AlgoConfig& a = config_.algo;
  Mean policy, value, aux, entropy, clip;
  for (int epoch = 0; epoch < a.ppo_epochs; ++epoch) {
    for (const auto& cells : rollout::minibatches(buffer.size(),
                                                  static_cast<std::size_t>(a.minibatches),
                                                  minibatch_rng_)) {
      const LossBatch batch = make_batch(buffer, cells);
      diff::Tape tape;
      const PolicyLosses l = ppo_losses(tape, agent_.policy(), batch, a);
      tape.backward(l.loss);
      clip_and_step(agent_.policy().params(), policy_adam_);
      policy.add(-l.surrogate);
      value.add(l.value);
      aux.add(l.auxiliary);
      entropy.add(l.entropy);
      clip.add(l.clip_fraction);
    }
  }
  row.policy_loss = policy.value();
  row.value_loss = value.value();
  row.advantage_loss = aux.value();
  row.entropy = entropy.value();
  row.clip_fraction = clip.value();
}

void Trainer::policy_phase(const rollout::RolloutBuffer& buffer, LogRow& row) {
  const AlgoConfig& a = config_.algo;
  const bool adversarial = discriminator_ != nullptr;
  const std::size_t n_pairs =
      std::max<std::size_t>(1, a.minibatch_size() / static_cast<std::size_t>(a.minibatches));
  Mean policy, aux, entropy, clip, encoder, disc;
  for (int epoch = 0; epoch < a.policy_epochs; ++epoch) {
    for (const auto& cells : rollout::minibatches(buffer.size(),
                                                  static_cast<std::size_t>(a.minibatches),
                                                  minibatch_rng_)) {
      const LossBatch batch = make_batch(buffer, cells);
      diff::Tape tape;
      const PolicyLosses l = daac_policy_loss(tape, agent_.policy(), batch, a);
      diff::Var loss = l.loss;

      invariance::PairBatch pairs;
      if (adversarial) {
        pairs = invariance::sample_order_pairs(buffer, n_pairs, pair_rng_);
        if (!pairs.empty()) {
          const std::size_t obs = buffer.observation_size;
          const diff::Var fa = agent_.policy().encode(
              tape, tape.constant({pairs.size(), obs}, gather_observations(buffer, pairs.first)));
          const diff::Var fb = agent_.policy().encode(
              tape, tape.constant({pairs.size(), obs}, gather_observations(buffer, pairs.second)));
          const auto le = invariance::encoder_invariance_loss(
              std::as_const(*discriminator_).frozen_logits(tape, fa, fb));
          encoder.add(le->item());
          if (a.invariance_coef != 0.0) {
            loss = diff::add(loss, diff::scale(*le, a.invariance_coef));
          }
        }
      }
      tape.backward(loss);
      clip_and_step(agent_.policy().params(), policy_adam_);

      if (adversarial && !pairs.empty()) {
        double ld = 0.0;
        discriminator_step(buffer, pairs, ld);
        disc.add(ld);
      }
      policy.add(-l.surrogate);
      aux.add(l.auxiliary);
      entropy.add(l.entropy);
      clip.add(l.clip_fraction);
    }
  }
  row.policy_loss = policy.value();
  row.advantage_loss = aux.value();
  row.entropy = entropy.value();
  row.clip_fraction = clip.value();
  row.encoder_loss = encoder.value();
  row.discriminator_loss = disc.value();
}

void Trainer::discriminator_step(const rollout::RolloutBuffer& buffer,
                                 const invariance::PairBatch& pairs, double& loss) {
  diff::Tape tape;
  const std::size_t obs = buffer.observation_size;
  const PolicyNetwork& frozen = agent_.policy();
  const diff::Var fa = frozen.encode(
      tape, tape.constant({pairs.size(), obs}, gather_observations(buffer, pairs.first)));
  const diff::Var fb = frozen.encode(
      tape, tape.constant({pairs.size(), obs}, gather_observations(buffer, pairs.second)));
  const auto ld = invariance::discriminator_loss(discriminator_->logits(tape, fa, fb),
                                                 pairs.labels,
                                                 config_.algo.lit_discriminator_loss);
  loss = ld->item();
  tape.backward(*ld);
  clip_and_step(discriminator_->params(), discriminator_adam_);
}

void Trainer::value_phase(const rollout::RolloutBuffer& buffer, LogRow& row) {
  const AlgoConfig& a = config_.algo;
  Mean value;
  for (int epoch = 0; epoch < a.value_epochs; ++epoch) {
    for (const auto& cells : rollout::minibatches(buffer.size(),
                                                  static_cast<std::size_t>(a.minibatches),
                                                  minibatch_rng_)) {
      const LossBatch batch = make_batch(buffer, cells);
      diff::Tape tape;
      const diff::Var lv = value_loss(tape, agent_.critic(), batch);
      tape.backward(lv);
      clip_and_step(agent_.critic().params(), critic_adam_);
      value.add(lv.item());
    }
  }
  row.value_loss = value.value();
}

// ---- checkpointing ----

namespace {

using persistence::Checkpoint;
using persistence::TensorRecord;

TensorRecord record(std::string name, const diff::Shape& shape,
                    std::vector<double> values) {
  TensorRecord t;
  t.name = std::move(name);
  t.shape.assign(shape.begin(), shape.end());
  t.values = std::move(values);
  return t;
}

TensorRecord vector_record(std::string name, std::vector<double> values) {
  TensorRecord t;
  t.name = std::move(name);
  t.shape = {values.size()};
  t.values = std::move(values);
  return t;
}

template <typename Int>
std::vector<double> to_doubles(const std::vector<Int>& v) {
  return {v.begin(), v.end()};
}

template <typename Int>
std::vector<Int> to_ints(const std::vector<double>& v) {
  std::vector<Int> out;
  out.reserve(v.size());
  for (const double x : v) out.push_back(static_cast<Int>(x));
  return out;
}

void save_store(Checkpoint& c, const std::string& prefix, const diff::ParameterStore& store,
                const diff::AdamState& adam) {
  for (std::size_t i = 0; i < store.size(); ++i) {
    const diff::Tensor& t = store.at(i);
    const std::string& name = store.name_of(i);
    c.tensors.push_back(record(prefix + "/" + name, t.shape, t.values));
    c.tensors.push_back(record(prefix + "/adam_m/" + name, t.shape, adam.first_moment[i]));
    c.tensors.push_back(record(prefix + "/adam_v/" + name, t.shape, adam.second_moment[i]));
  }
  c.counters.push_back({prefix + "/adam_step", static_cast<std::int64_t>(adam.step)});
}

const std::vector<double>& checked(const Checkpoint& c, const std::string& name,
                                   std::size_t expected) {
  const TensorRecord& t = c.tensor(name);
  if (t.values.size() != expected) {
    throw FormatError(0, "checkpoint tensor '" + name + "' has " +
                             std::to_string(t.values.size()) + " values, expected " +
                             std::to_string(expected));
  }
  return t.values;
}

void load_store(const Checkpoint& c, const std::string& prefix, diff::ParameterStore& store,
                diff::AdamState& adam) {
  for (std::size_t i = 0; i < store.size(); ++i) {
    diff::Tensor& t = store.at(i);
    const std::string& name = store.name_of(i);
    t.values = checked(c, prefix + "/" + name, t.size());
    adam.first_moment[i] = checked(c, prefix + "/adam_m/" + name, t.size());
    adam.second_moment[i] = checked(c, prefix + "/adam_v/" + name, t.size());
  }
  adam.step = static_cast<std::uint64_t>(c.counter(prefix + "/adam_step"));
}

}  // namespace

persistence::Checkpoint Trainer::checkpoint(const std::string& config_text) const {
  Checkpoint c;
  c.config_text = config_text;
  save_store(c, "policy", agent_.policy().params(), policy_adam_);
  if (agent_.has_critic()) save_store(c, "critic", agent_.critic().params(), critic_adam_);
  if (discriminator_) {
    save_store(c, "discriminator", discriminator_->params(), discriminator_adam_);
  }
  const rollout::RunningStat& stat = normalizer_.stat();
  c.tensors.push_back(vector_record("normalizer/stat", {stat.count, stat.mean, stat.m2}));
  c.tensors.push_back(vector_record("normalizer/returns", normalizer_.returns()));

  const envs::VecEnv::Snapshot env = envs_.snapshot();
  c.tensors.push_back(vector_record("env/cursor", to_doubles(env.cursor)));
  c.tensors.push_back(vector_record("env/position", to_doubles(env.position)));
  c.tensors.push_back(vector_record("env/step", to_doubles(env.step)));
  c.tensors.push_back(vector_record("env/episode_return", env.episode_return));
  c.tensors.push_back(vector_record("env/completed_returns", env.completed_returns));
  c.tensors.push_back(vector_record("log/last_return", {last_return_}));
  c.tensors.push_back(vector_record("log/last_value_loss", {last_value_loss_}));

  c.rngs.push_back({"action", action_rng_.state()});
  c.rngs.push_back({"minibatch", minibatch_rng_.state()});
  c.rngs.push_back({"pair", pair_rng_.state()});
  c.counters.push_back({"seed", static_cast<std::int64_t>(seed_)});
  c.counters.push_back({"updates_done", updates_done_});
  c.counters.push_back({"env_steps", static_cast<std::int64_t>(env_steps_)});
  return c;
}

void Trainer::restore(const persistence::Checkpoint& c) {
  load_store(c, "policy", agent_.policy().params(), policy_adam_);
  if (agent_.has_critic()) load_store(c, "critic", agent_.critic().params(), critic_adam_);
  if (discriminator_) {
    load_store(c, "discriminator", discriminator_->params(), discriminator_adam_);
  }
  const std::size_t n = envs_.size();
  const auto& stat = checked(c, "normalizer/stat", 3);
  normalizer_.restore({stat[0], stat[1], stat[2]}, checked(c, "normalizer/returns", n));

  envs::VecEnv::Snapshot env;
  env.cursor = to_ints<std::int64_t>(checked(c, "env/cursor", n));
  env.position = to_ints<std::int64_t>(checked(c, "env/position", n));
  env.step = to_ints<std::int64_t>(checked(c, "env/step", n));
  env.episode_return = checked(c, "env/episode_return", n);
  env.completed_returns = c.tensor("env/completed_returns").values;
  envs_.restore(env);
  last_return_ = checked(c, "log/last_return", 1)[0];
  last_value_loss_ = checked(c, "log/last_value_loss", 1)[0];

  action_rng_.set_state(c.rng("action").state);
  minibatch_rng_.set_state(c.rng("minibatch").state);
  pair_rng_.set_state(c.rng("pair").state);
  updates_done_ = static_cast<int>(c.counter("updates_done"));
  env_steps_ = static_cast<std::uint64_t>(c.counter("env_steps"));
  log_.clear();
}

}  // namespace daaclab::algos
