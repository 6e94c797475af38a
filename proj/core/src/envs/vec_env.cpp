#include "daaclab/envs/vec_env.hpp"

#include "daaclab/common/error.hpp"

namespace daaclab::envs {

std::vector<std::int64_t> seed_range(std::int64_t first, std::size_t count) {
  std::vector<std::int64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) {
    seeds[i] = first + static_cast<std::int64_t>(i);
  }
  return seeds;
}

std::vector<std::int64_t> train_seeds(std::size_t count) {
  return seed_range(1, count);
}

std::vector<std::int64_t> test_seeds(std::size_t count) {
  return seed_range(10001, count);
}

VecEnv::VecEnv(FamilyParams params, std::vector<std::int64_t> seed_pool,
               std::size_t num_envs)
    : params_(std::move(params)),
      pool_(std::move(seed_pool)),
      obs_size_(params_.observation_size()) {
  if (pool_.empty()) throw DomainError("VecEnv: empty seed pool");
  if (num_envs == 0) throw DomainError("VecEnv: need at least one env");
  levels_.reserve(pool_.size());
  for (const std::int64_t seed : pool_) {
    levels_.push_back(generate_level(seed, params_));
  }
  cursor_.resize(num_envs);
  states_.resize(num_envs);
  episode_return_.assign(num_envs, 0.0);
  observations_.assign(num_envs * obs_size_, 0.0);
  for (std::size_t i = 0; i < num_envs; ++i) {
    cursor_[i] = i % pool_.size();
    begin_episode(i);
  }
}

void VecEnv::begin_episode(std::size_t env) {
  states_[env] = start(levels_[cursor_[env]]);
  episode_return_[env] = 0.0;
  observe_into(*states_[env].level, params_, 0, 0,
               std::span<double>(observations_).subspan(env * obs_size_, obs_size_));
}

std::vector<StepResult> VecEnv::step(std::span<const std::size_t> actions) {
  if (actions.size() != states_.size()) {
    throw DimensionError("vec_step: " + std::to_string(actions.size()) +
                         " actions for " + std::to_string(states_.size()) +
                         " environments");
  }
  std::vector<StepResult> results(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    StepResult r = envs::step(states_[i], params_, actions[i]);
    episode_return_[i] += r.reward;
    if (r.done) {
      completed_returns_.push_back(episode_return_[i]);
      cursor_[i] = (cursor_[i] + 1) % pool_.size();
      begin_episode(i);
      const auto obs = observations().subspan(i * obs_size_, obs_size_);
      r.observation.assign(obs.begin(), obs.end());
    } else {
      std::copy(r.observation.begin(), r.observation.end(),
                observations_.begin() + static_cast<std::ptrdiff_t>(i * obs_size_));
    }
    results[i] = std::move(r);
  }
  return results;
}

std::vector<double> VecEnv::take_completed_returns() {
  std::vector<double> out;
  out.swap(completed_returns_);
  return out;
}

VecEnv::Snapshot VecEnv::snapshot() const {
  Snapshot s;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    s.cursor.push_back(static_cast<std::int64_t>(cursor_[i]));
    s.position.push_back(states_[i].position);
    s.step.push_back(states_[i].step);
  }
  s.episode_return = episode_return_;
  s.completed_returns = completed_returns_;
  return s;
}

void VecEnv::restore(const Snapshot& s) {
  if (s.cursor.size() != states_.size() || s.position.size() != states_.size() ||
      s.step.size() != states_.size() ||
      s.episode_return.size() != states_.size()) {
    throw DimensionError("VecEnv::restore: snapshot has wrong env count");
  }
  for (std::size_t i = 0; i < states_.size(); ++i) {
    cursor_[i] = static_cast<std::size_t>(s.cursor[i]) % pool_.size();
    states_[i] = start(levels_[cursor_[i]]);
    states_[i].position = static_cast<int>(s.position[i]);
    states_[i].step = static_cast<int>(s.step[i]);
    observe_into(levels_[cursor_[i]], params_, states_[i].position,
                 states_[i].step,
                 std::span<double>(observations_).subspan(i * obs_size_, obs_size_));
  }
  episode_return_ = s.episode_return;
  completed_returns_ = s.completed_returns;
}

}  // namespace daaclab::envs
