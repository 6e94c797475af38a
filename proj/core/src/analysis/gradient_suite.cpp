#include "daaclab/analysis/gradient_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

#include "daaclab/algos/config.hpp"
#include "daaclab/algos/losses.hpp"
#include "daaclab/algos/networks.hpp"
#include "daaclab/common/hash.hpp"
#include "daaclab/common/rng.hpp"
#include "daaclab/diffcore/mlp.hpp"
#include "daaclab/diffcore/ops.hpp"
#include "daaclab/invariance/discriminator.hpp"

namespace daaclab::analysis {

std::size_t GradientSuiteReport::trials() const {
  std::size_t n = 0;
  for (const auto& c : cases) n += c.trials;
  return n;
}

double GradientSuiteReport::max_error() const {
  double worst = 0.0;
  for (const auto& c : cases) worst = std::max(worst, c.max_error);
  return worst;
}

namespace {

using diff::ParameterStore;
using diff::Shape;
using diff::Tensor;
using diff::Tape;
using diff::Var;

using Forward = std::function<Var(Tape&)>;

std::vector<double> normals(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

// Moves values off the kinks of piecewise ops so central differences with a
// small step never straddle one.
void avoid(std::vector<double>& values, std::initializer_list<double> kinks) {
  for (double& v : values) {
    for (const double k : kinks) {
      if (std::abs(v - k) < 1e-2) v = k + (v >= k ? 2e-2 : -2e-2);
    }
  }
}

std::size_t dim(Rng& rng, std::size_t max) { return 1 + rng.uniform_index(max); }

Tensor& input(ParameterStore& store, const std::string& name, Shape shape,
              Rng& rng) {
  const std::size_t n = diff::element_count(shape);
  return store.add(name, std::move(shape), normals(rng, n));
}

// sum(y * W) with a fixed random W, so every output element contributes a
// distinct weight to the gradient.
diff::GradCheckResult check_output(ParameterStore& store, const Forward& f, Rng& rng,
                                   const diff::GradCheckOptions& options) {
  Shape shape;
  std::vector<double> weights;
  {
    Tape tape;
    const Var y = f(tape);
    shape = y.shape();
    weights = normals(rng, y.size());
  }
  return diff::check_gradients(
      store,
      [&](Tape& tape) { return diff::sum(diff::mul(f(tape), tape.constant(shape, weights))); },
      options);
}

using OpSetup = std::function<Forward(ParameterStore&, Rng&)>;

struct OpCase {
  std::string name;
  OpSetup setup;
};

Forward unary(ParameterStore& store, Rng& rng, Var (*op)(Var),
              std::initializer_list<double> kinks = {}, double offset = 0.0,
              bool positive = false) {
  Tensor& a = input(store, "a", {dim(rng, 4), dim(rng, 5)}, rng);
  for (double& v : a.values) v = positive ? std::abs(v) + 0.2 : v + offset;
  avoid(a.values, kinks);
  return [&store, op](Tape& t) { return op(t.parameter(store, "a")); };
}

Forward binary(ParameterStore& store, Rng& rng, Var (*op)(Var, Var)) {
  const Shape shape{dim(rng, 4), dim(rng, 5)};
  Tensor& a = input(store, "a", shape, rng);
  Tensor& b = input(store, "b", shape, rng);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) < 1e-2) b[i] += 5e-2;
  }
  return [&store, op](Tape& t) {
    return op(t.parameter(store, "a"), t.parameter(store, "b"));
  };
}

std::vector<OpCase> op_cases() {
  std::vector<OpCase> cases;
  cases.push_back({"matmul", [](ParameterStore& s, Rng& rng) -> Forward {
                     const std::size_t r = dim(rng, 4), k = dim(rng, 4), c = dim(rng, 5);
                     input(s, "a", {r, k}, rng);
                     input(s, "b", {k, c}, rng);
                     return [&s](Tape& t) {
                       return diff::matmul(t.parameter(s, "a"), t.parameter(s, "b"));
                     };
                   }});
  cases.push_back({"affine", [](ParameterStore& s, Rng& rng) -> Forward {
                     const std::size_t r = dim(rng, 4), k = dim(rng, 4), c = dim(rng, 5);
                     input(s, "x", {r, k}, rng);
                     input(s, "w", {k, c}, rng);
                     input(s, "b", {c}, rng);
                     return [&s](Tape& t) {
                       return diff::affine(t.parameter(s, "x"), t.parameter(s, "w"),
                                           t.parameter(s, "b"));
                     };
                   }});
  cases.push_back({"add_bias", [](ParameterStore& s, Rng& rng) -> Forward {
                     const std::size_t r = dim(rng, 4), c = dim(rng, 5);
                     input(s, "x", {r, c}, rng);
                     input(s, "b", {c}, rng);
                     return [&s](Tape& t) {
                       return diff::add_bias(t.parameter(s, "x"), t.parameter(s, "b"));
                     };
                   }});
  cases.push_back({"add", [](ParameterStore& s, Rng& rng) { return binary(s, rng, diff::add); }});
  cases.push_back({"sub", [](ParameterStore& s, Rng& rng) { return binary(s, rng, diff::sub); }});
  cases.push_back({"mul", [](ParameterStore& s, Rng& rng) { return binary(s, rng, diff::mul); }});
  cases.push_back({"minimum", [](ParameterStore& s, Rng& rng) { return binary(s, rng, diff::minimum); }});
  cases.push_back({"scale", [](ParameterStore& s, Rng& rng) {
                     return unary(s, rng, [](Var a) { return diff::scale(a, -1.7); });
                   }});
  cases.push_back({"add_scalar", [](ParameterStore& s, Rng& rng) {
                     return unary(s, rng, [](Var a) { return diff::add_scalar(a, 0.3); });
                   }});
  cases.push_back({"tanh", [](ParameterStore& s, Rng& rng) { return unary(s, rng, diff::tanh); }});
  cases.push_back({"relu", [](ParameterStore& s, Rng& rng) { return unary(s, rng, diff::relu, {0.0}); }});
  cases.push_back({"sigmoid", [](ParameterStore& s, Rng& rng) { return unary(s, rng, diff::sigmoid); }});
  cases.push_back({"log_sigmoid", [](ParameterStore& s, Rng& rng) { return unary(s, rng, diff::log_sigmoid); }});
  cases.push_back({"exp", [](ParameterStore& s, Rng& rng) { return unary(s, rng, diff::exp); }});
  cases.push_back({"log", [](ParameterStore& s, Rng& rng) {
                     return unary(s, rng, diff::log, {}, 0.0, true);
                   }});
  cases.push_back({"square", [](ParameterStore& s, Rng& rng) { return unary(s, rng, diff::square); }});
  cases.push_back({"clamp", [](ParameterStore& s, Rng& rng) {
                     return unary(s, rng, [](Var a) { return diff::clamp(a, -0.5, 0.5); },
                                  {-0.5, 0.5});
                   }});
  cases.push_back({"log_softmax", [](ParameterStore& s, Rng& rng) { return unary(s, rng, diff::log_softmax); }});
  cases.push_back({"softmax", [](ParameterStore& s, Rng& rng) { return unary(s, rng, diff::softmax); }});
  cases.push_back({"row_sum", [](ParameterStore& s, Rng& rng) { return unary(s, rng, diff::row_sum); }});
  cases.push_back({"sum", [](ParameterStore& s, Rng& rng) { return unary(s, rng, diff::sum); }});
  cases.push_back({"mean", [](ParameterStore& s, Rng& rng) { return unary(s, rng, diff::mean); }});
  cases.push_back({"reshape", [](ParameterStore& s, Rng& rng) -> Forward {
                     const std::size_t r = dim(rng, 4), c = dim(rng, 5);
                     input(s, "a", {r, c}, rng);
                     return [&s, n = r * c](Tape& t) {
                       return diff::reshape(t.parameter(s, "a"), {n});
                     };
                   }});
  cases.push_back({"gather_cols", [](ParameterStore& s, Rng& rng) -> Forward {
                     const std::size_t r = dim(rng, 4), c = dim(rng, 5);
                     input(s, "a", {r, c}, rng);
                     std::vector<std::size_t> index(r);
                     for (auto& i : index) i = rng.uniform_index(c);
                     return [&s, index](Tape& t) {
                       return diff::gather_cols(t.parameter(s, "a"), index);
                     };
                   }});
  cases.push_back({"select_rows", [](ParameterStore& s, Rng& rng) -> Forward {
                     const std::size_t r = dim(rng, 4), c = dim(rng, 5);
                     input(s, "a", {r, c}, rng);
                     std::vector<std::size_t> rows(dim(rng, 6));
                     for (auto& i : rows) i = rng.uniform_index(r);
                     return [&s, rows](Tape& t) {
                       return diff::select_rows(t.parameter(s, "a"), rows);
                     };
                   }});
  cases.push_back({"concat_cols", [](ParameterStore& s, Rng& rng) -> Forward {
                     const std::size_t r = dim(rng, 4);
                     input(s, "a", {r, dim(rng, 4)}, rng);
                     input(s, "b", {r, dim(rng, 4)}, rng);
                     return [&s](Tape& t) {
                       return diff::concat_cols(t.parameter(s, "a"), t.parameter(s, "b"));
                     };
                   }});
  for (const auto activation : {diff::Activation::kTanh, diff::Activation::kRelu}) {
    const std::string name =
        activation == diff::Activation::kTanh ? "mlp_tanh" : "mlp_relu";
    cases.push_back({name, [activation](ParameterStore& s, Rng& rng) -> Forward {
                       const std::size_t r = dim(rng, 4), in = dim(rng, 4);
                       diff::MlpSpec spec{{in, 5, 4, dim(rng, 3)}, activation, false};
                       diff::init_mlp(s, "mlp", spec, rng, {1.0});
                       // Orthogonal init leaves zero biases; perturb them so relu
                       // units sit at distinct offsets.
                       for (std::size_t l = 0; l < spec.layer_count(); ++l) {
                         for (double& b : s.at(diff::bias_name("mlp", l)).values) {
                           b = 0.3 * rng.normal();
                         }
                       }
                       const std::vector<double> x = normals(rng, r * in);
                       return [&s, spec, x, r, in](Tape& t) {
                         return diff::forward_mlp(t, s, "mlp", spec, t.constant({r, in}, x));
                       };
                     }});
  }
  return cases;
}

constexpr std::size_t kObservation = 6;
constexpr std::size_t kActions = 3;
constexpr std::size_t kHidden = 5;
constexpr std::size_t kRows = 7;
constexpr std::size_t kPairs = 4;

algos::LossBatch random_batch(Rng& rng) {
  algos::LossBatch b;
  b.rows = kRows;
  b.observation_size = kObservation;
  b.observations = normals(rng, kRows * kObservation);
  b.actions.resize(kRows);
  for (auto& a : b.actions) a = rng.uniform_index(kActions);
  b.old_log_probs = normals(rng, kRows, 0.3);
  for (double& lp : b.old_log_probs) lp += std::log(1.0 / static_cast<double>(kActions));
  b.advantages = normals(rng, kRows, 2.0);
  b.targets = normals(rng, kRows, 3.0);
  return b;
}

void perturb(ParameterStore& store, Rng& rng) {
  // Fresh orthogonal nets have zero biases and a tiny policy head; jitter
  // everything so the check is not confined to a degenerate point.
  for (auto& [name, tensor] : store) {
    for (double& v : tensor.values) v += 0.2 * rng.normal();
  }
}

struct CompositeFixture {
  algos::AlgoConfig config;
  algos::LossBatch batch;
  std::unique_ptr<algos::PolicyNetwork> net;
  std::unique_ptr<algos::ValueNetwork> critic;
  std::unique_ptr<invariance::Discriminator> discriminator;
  std::vector<double> first, second, labels;
  // Constant features for the discriminator-only check.
  std::vector<double> features_a, features_b;
};

CompositeFixture fixture(algos::Algorithm algo, Rng& rng) {
  CompositeFixture f;
  f.config.algorithm = algo;
  f.config.invariance_coef = 0.5;
  f.batch = random_batch(rng);
  f.net = std::make_unique<algos::PolicyNetwork>(
      algos::policy_layout(algo, kObservation, kActions, kHidden), rng);
  perturb(f.net->params(), rng);
  f.critic = std::make_unique<algos::ValueNetwork>(kObservation, kHidden, rng);
  perturb(f.critic->params(), rng);
  f.discriminator = std::make_unique<invariance::Discriminator>(kHidden, 6, rng);
  perturb(f.discriminator->params(), rng);
  f.first = normals(rng, kPairs * kObservation);
  f.second = normals(rng, kPairs * kObservation);
  f.features_a = normals(rng, kPairs * kHidden);
  f.features_b = normals(rng, kPairs * kHidden);
  for (std::size_t i = 0; i < kPairs; ++i) f.labels.push_back(rng.uniform() < 0.5 ? 0.0 : 1.0);
  return f;
}

Var invariance_term(Tape& t, CompositeFixture& f) {
  const Var a = f.net->encode(t, t.constant({kPairs, kObservation}, f.first));
  const Var b = f.net->encode(t, t.constant({kPairs, kObservation}, f.second));
  const invariance::Discriminator& d = *f.discriminator;
  return *invariance::encoder_invariance_loss(d.frozen_logits(t, a, b));
}

struct CompositeCase {
  std::string name;
  algos::Algorithm algo;
  std::function<diff::GradCheckResult(CompositeFixture&, const diff::GradCheckOptions&)> run;
};

std::vector<CompositeCase> composite_cases() {
  using algos::Algorithm;
  auto shared = [](CompositeFixture& f, const diff::GradCheckOptions& o) {
    return diff::check_gradients(
        f.net->params(),
        [&f](Tape& t) { return algos::ppo_losses(t, *f.net, f.batch, f.config).loss; }, o);
  };
  auto policy = [](CompositeFixture& f, const diff::GradCheckOptions& o) {
    return diff::check_gradients(
        f.net->params(),
        [&f](Tape& t) { return algos::daac_policy_loss(t, *f.net, f.batch, f.config).loss; },
        o);
  };
  std::vector<CompositeCase> cases;
  cases.push_back({"ppo_objective", Algorithm::kPpo, shared});
  cases.push_back({"aac_objective", Algorithm::kAac, shared});
  cases.push_back({"daac_policy_objective", Algorithm::kDaac, policy});
  cases.push_back({"dvac_policy_objective", Algorithm::kDvac, policy});
  cases.push_back({"naive_policy_objective", Algorithm::kNaiveDecoupled, policy});
  cases.push_back({"idaac_policy_objective", Algorithm::kIdaac,
                   [](CompositeFixture& f, const diff::GradCheckOptions& o) {
                     return diff::check_gradients(
                         f.net->params(),
                         [&f](Tape& t) {
                           const Var j = algos::daac_policy_loss(t, *f.net, f.batch, f.config).loss;
                           return diff::add(j, diff::scale(invariance_term(t, f),
                                                           f.config.invariance_coef));
                         },
                         o);
                   }});
  cases.push_back({"value_loss", Algorithm::kDaac,
                   [](CompositeFixture& f, const diff::GradCheckOptions& o) {
                     return diff::check_gradients(
                         f.critic->params(),
                         [&f](Tape& t) { return algos::value_loss(t, *f.critic, f.batch); }, o);
                   }});
  for (const bool literal : {false, true}) {
    cases.push_back({literal ? "discriminator_loss_literal" : "discriminator_loss",
                     Algorithm::kIdaac,
                     [literal](CompositeFixture& f, const diff::GradCheckOptions& o) {
                       return diff::check_gradients(
                           f.discriminator->params(),
                           [&f, literal](Tape& t) {
                             const Var a = t.constant({kPairs, kHidden}, f.features_a);
                             const Var b = t.constant({kPairs, kHidden}, f.features_b);
                             return *invariance::discriminator_loss(
                                 f.discriminator->logits(t, a, b), f.labels, literal);
                           },
                           o);
                     }});
  }
  cases.push_back({"encoder_invariance_loss", Algorithm::kIdaac,
                   [](CompositeFixture& f, const diff::GradCheckOptions& o) {
                     return diff::check_gradients(
                         f.net->params(), [&f](Tape& t) { return invariance_term(t, f); }, o);
                   }});
  return cases;
}

}  // namespace

GradientSuiteReport run_gradient_suite(std::uint64_t seed, std::size_t trials_per_case,
                                       diff::GradCheckOptions options) {
  GradientSuiteReport report;
  report.step = options.step;
  std::uint64_t tag = 0;
  auto record = [&](GradientCase& c, const diff::GradCheckResult& r) {
    ++c.trials;
    c.checked += r.checked;
    if (r.max_error >= c.max_error) {
      c.max_error = r.max_error;
      c.worst_parameter = r.worst_parameter;
    }
  };
  for (const OpCase& op : op_cases()) {
    GradientCase c;
    c.name = op.name;
    for (std::size_t trial = 0; trial < trials_per_case; ++trial) {
      Rng rng(hash_combine(seed, ++tag));
      ParameterStore store("inputs");
      const Forward f = op.setup(store, rng);
      record(c, check_output(store, f, rng, options));
    }
    report.cases.push_back(std::move(c));
  }
  for (const CompositeCase& composite : composite_cases()) {
    GradientCase c;
    c.name = composite.name;
    for (std::size_t trial = 0; trial < trials_per_case; ++trial) {
      Rng rng(hash_combine(seed, ++tag));
      CompositeFixture f = fixture(composite.algo, rng);
      record(c, composite.run(f, options));
    }
    report.cases.push_back(std::move(c));
  }
  return report;
}

}  // namespace daaclab::analysis
