#include "daaclab/persistence/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

#include "daaclab/common/error.hpp"
#include "daaclab/common/format.hpp"
#include "daaclab/common/hash.hpp"
#include "daaclab/persistence/checkpoint.hpp"

namespace daaclab::persistence {

namespace {

using algos::ExperimentConfig;

// A failed conversion or range check; the parser adds the line number.
struct ValueError {
  std::string message;
};

long long to_int(std::string_view s) {
  long long v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ValueError{"expected an integer, got '" + std::string(s) + "'"};
  }
  return v;
}

double to_double(std::string_view s) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) {
    throw ValueError{"expected a number, got '" + std::string(s) + "'"};
  }
  return v;
}

bool to_bool(std::string_view s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ValueError{"expected true or false, got '" + std::string(s) + "'"};
}

struct Key {
  std::string section;
  std::string name;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

Key int_key(std::string section, std::string name,
            std::function<int&(ExperimentConfig&)> ref, long long lo, long long hi) {
  Key k{section, name, {}, {}};
  k.set = [ref, lo, hi, name](ExperimentConfig& c, std::string_view v) {
    const long long x = to_int(v);
    if (x < lo || x > hi) {
      throw ValueError{name + " = " + std::to_string(x) + " is out of range [" +
                       std::to_string(lo) + ", " + std::to_string(hi) + "]"};
    }
    ref(c) = static_cast<int>(x);
  };
  k.get = [ref](const ExperimentConfig& c) {
    ExperimentConfig copy = c;
    return std::to_string(ref(copy));
  };
  return k;
}

Key double_key(std::string section, std::string name,
               std::function<double&(ExperimentConfig&)> ref, double lo, double hi,
               bool open_low = false) {
  Key k{section, name, {}, {}};
  k.set = [ref, lo, hi, open_low, name](ExperimentConfig& c, std::string_view v) {
    const double x = to_double(v);
    if (x < lo || x > hi || (open_low && x == lo)) {
      throw ValueError{name + " = " + format_double(x) + " is out of range " +
                       (open_low ? "(" : "[") + format_double(lo) + ", " +
                       format_double(hi) + "]"};
    }
    ref(c) = x;
  };
  k.get = [ref](const ExperimentConfig& c) {
    ExperimentConfig copy = c;
    return format_double(ref(copy));
  };
  return k;
}

Key bool_key(std::string section, std::string name,
             std::function<bool&(ExperimentConfig&)> ref) {
  Key k{section, name, {}, {}};
  k.set = [ref](ExperimentConfig& c, std::string_view v) { ref(c) = to_bool(v); };
  k.get = [ref](const ExperimentConfig& c) {
    ExperimentConfig copy = c;
    return std::string(ref(copy) ? "true" : "false");
  };
  return k;
}

constexpr double kInf = 1e300;
constexpr long long kMaxInt = 1LL << 30;

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> t;
    const std::string A = "algo", E = "env", V = "eval";
    t.push_back({A, "algo",
                 [](ExperimentConfig& c, std::string_view v) {
                   try {
                     c.algo.algorithm = algos::parse_algorithm(v);
                   } catch (const DomainError& e) {
                     throw ValueError{e.what()};
                   }
                 },
                 [](const ExperimentConfig& c) {
                   return std::string(algos::to_string(c.algo.algorithm));
                 }});
    t.push_back(double_key(A, "gamma", [](auto& c) -> double& { return c.algo.gamma; }, 0, 1));
    t.push_back(double_key(A, "lambda", [](auto& c) -> double& { return c.algo.lambda; }, 0, 1));
    t.push_back(double_key(A, "clip", [](auto& c) -> double& { return c.algo.clip; }, 0, 1, true));
    t.push_back(double_key(A, "entropy_coef", [](auto& c) -> double& { return c.algo.entropy_coef; }, 0, kInf));
    t.push_back(double_key(A, "value_coef", [](auto& c) -> double& { return c.algo.value_coef; }, 0, kInf));
    t.push_back(double_key(A, "advantage_coef", [](auto& c) -> double& { return c.algo.advantage_coef; }, 0, kInf));
    t.push_back(double_key(A, "invariance_coef", [](auto& c) -> double& { return c.algo.invariance_coef; }, 0, kInf));
    t.push_back(int_key(A, "ppo_epochs", [](auto& c) -> int& { return c.algo.ppo_epochs; }, 1, kMaxInt));
    t.push_back(int_key(A, "policy_epochs", [](auto& c) -> int& { return c.algo.policy_epochs; }, 1, kMaxInt));
    t.push_back(int_key(A, "value_epochs", [](auto& c) -> int& { return c.algo.value_epochs; }, 1, kMaxInt));
    t.push_back(int_key(A, "value_freq", [](auto& c) -> int& { return c.algo.value_freq; }, 1, kMaxInt));
    t.push_back(int_key(A, "minibatches", [](auto& c) -> int& { return c.algo.minibatches; }, 1, kMaxInt));
    t.push_back(double_key(A, "learning_rate", [](auto& c) -> double& { return c.algo.learning_rate; }, 0, kInf, true));
    t.push_back(int_key(A, "updates", [](auto& c) -> int& { return c.algo.updates; }, 1, kMaxInt));
    t.push_back(double_key(A, "grad_clip", [](auto& c) -> double& { return c.algo.grad_clip; }, 0, kInf));
    t.push_back(bool_key(A, "reward_norm", [](auto& c) -> bool& { return c.algo.reward_norm; }));
    t.push_back(double_key(A, "reward_clip", [](auto& c) -> double& { return c.algo.reward_clip; }, 0, kInf));
    t.push_back({A, "value_target",
                 [](ExperimentConfig& c, std::string_view v) {
                   try {
                     c.algo.value_target = rollout::parse_value_target(v);
                   } catch (const Error& e) {
                     throw ValueError{e.what()};
                   }
                 },
                 [](const ExperimentConfig& c) {
                   return std::string(rollout::to_string(c.algo.value_target));
                 }});
    t.push_back(int_key(A, "num_envs", [](auto& c) -> int& { return c.algo.num_envs; }, 1, 1 << 16));
    t.push_back(int_key(A, "num_steps", [](auto& c) -> int& { return c.algo.num_steps; }, 1, 1 << 16));
    t.push_back(int_key(A, "hidden", [](auto& c) -> int& { return c.algo.hidden; }, 1, 1 << 14));
    t.push_back(int_key(A, "discriminator_hidden", [](auto& c) -> int& { return c.algo.discriminator_hidden; }, 1, 1 << 14));
    t.push_back(bool_key(A, "lit_discriminator_loss", [](auto& c) -> bool& { return c.algo.lit_discriminator_loss; }));

    t.push_back({E, "family",
                 [](ExperimentConfig& c, std::string_view v) {
                   try {
                     c.env.family = envs::parse_family(v);
                   } catch (const DomainError& e) {
                     throw ValueError{e.what()};
                   }
                 },
                 [](const ExperimentConfig& c) { return std::string(envs::to_string(c.env.family)); }});
    t.push_back(int_key(E, "min_length", [](auto& c) -> int& { return c.env.min_length; }, 3, 1 << 16));
    t.push_back(int_key(E, "max_length", [](auto& c) -> int& { return c.env.max_length; }, 3, 1 << 16));
    t.push_back(int_key(E, "window", [](auto& c) -> int& { return c.env.window; }, 0, 1 << 10));
    t.push_back(int_key(E, "background_dim", [](auto& c) -> int& { return c.env.background_dim; }, 0, 1 << 12));
    t.push_back(bool_key(E, "coupled", [](auto& c) -> bool& { return c.env.coupled; }));
    t.push_back(double_key(E, "hazard_density", [](auto& c) -> double& { return c.env.hazard_density; }, 0, 1));
    t.push_back(double_key(E, "goal_reward", [](auto& c) -> double& { return c.env.goal_reward; }, -kInf, kInf));
    t.push_back(double_key(E, "hazard_penalty", [](auto& c) -> double& { return c.env.hazard_penalty; }, -kInf, kInf));
    t.push_back(int_key(E, "max_steps", [](auto& c) -> int& { return c.env.max_steps; }, 1, kMaxInt));
    t.push_back(int_key(E, "hazard_period", [](auto& c) -> int& { return c.env.hazard_period; }, 1, 1 << 16));
    t.push_back(int_key(E, "train_levels", [](auto& c) -> int& { return c.train_levels; }, 1, 10000));

    t.push_back(int_key(V, "episodes", [](auto& c) -> int& { return c.eval.episodes; }, 1, kMaxInt));
    t.push_back(int_key(V, "test_levels", [](auto& c) -> int& { return c.eval.test_levels; }, 1, 10000));
    t.push_back({V, "seed",
                 [](ExperimentConfig& c, std::string_view v) {
                   const long long x = to_int(v);
                   if (x < 0) throw ValueError{"seed must be non-negative"};
                   c.eval.seed = static_cast<std::uint64_t>(x);
                 },
                 [](const ExperimentConfig& c) { return std::to_string(c.eval.seed); }});
    t.push_back(int_key(V, "runs", [](auto& c) -> int& { return c.eval.runs; }, 1, 1 << 16));
    t.push_back(bool_key(V, "wall_time", [](auto& c) -> bool& { return c.eval.wall_time; }));
    return t;
  }();
  return table;
}

}  // namespace

algos::ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::string section;
  std::set<std::string> seen;
  const std::vector<std::string> lines = split(text, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i + 1);
    std::string_view line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "algo" && section != "env" && section != "eval") {
        throw ConfigError(line_no, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError(line_no, "key '" + key + "' appears before any section");
    }
    const Key* entry = nullptr;
    for (const Key& k : keys()) {
      if (k.section == section && k.name == key) entry = &k;
    }
    if (entry == nullptr) {
      throw ConfigError(line_no, "unknown key '" + key + "' in [" + section + "]");
    }
    if (!seen.insert(section + "." + key).second) {
      throw ConfigError(line_no, "duplicate key '" + key + "' in [" + section + "]");
    }
    if (value.empty()) throw ConfigError(line_no, "missing value for '" + key + "'");
    try {
      entry->set(config, value);
    } catch (const ValueError& e) {
      throw ConfigError(line_no, e.message);
    }
  }
  config.validate();
  return config;
}

algos::ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path));
}

std::string serialize_config(const algos::ExperimentConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const Key& k : keys()) {
    if (k.section != section) {
      if (!section.empty()) out << "\n";
      section = k.section;
      out << "[" << section << "]\n";
    }
    out << k.name << " = " << k.get(config) << "\n";
  }
  return out.str();
}

std::string content_hash(std::string_view text) {
  const std::uint64_t h =
      fnv1a64(reinterpret_cast<const unsigned char*>(text.data()), text.size());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace daaclab::persistence
