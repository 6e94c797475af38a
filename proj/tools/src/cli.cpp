#include "daaclab/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "daaclab/algos/config.hpp"
#include "daaclab/algos/trainer.hpp"
#include "daaclab/analysis/diagnostics.hpp"
#include "daaclab/analysis/eval.hpp"
#include "daaclab/analysis/gradient_suite.hpp"
#include "daaclab/analysis/report.hpp"
#include "daaclab/analysis/studies.hpp"
#include "daaclab/common/error.hpp"
#include "daaclab/common/format.hpp"
#include "daaclab/envs/level.hpp"
#include "daaclab/envs/vec_env.hpp"
#include "daaclab/persistence/checkpoint.hpp"
#include "daaclab/persistence/config.hpp"
#include "daaclab/persistence/manifest.hpp"

namespace daaclab::cli {
namespace {

namespace fs = std::filesystem;
using algos::Algorithm;
using algos::ExperimentConfig;

struct Common {
  std::string config_path;
  std::string out_dir = "daaclab_out";
  std::string algo;
  // Shared by every subcommand, so presence lives in the value itself.
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> budget;
  std::optional<int> seeds_train;
  std::optional<int> seeds_test;
  std::optional<int> runs;
  std::size_t jobs = 1;
  std::string checkpoint;
};

void add_common(CLI::App& app, Common& c) {
  app.add_option("--config", c.config_path, "INI config file (defaults when omitted)")
      ->check(CLI::ExistingFile);
  app.add_option("--out", c.out_dir, "output directory");
  app.add_option("--algo", c.algo, "ppo|daac|idaac|dvac|aac|naive_decoupled");
  app.add_option("--seed", c.seed, "master seed");
  app.add_option("--budget", c.budget, "env-step budget per run")->check(CLI::PositiveNumber);
  app.add_option("--seeds-train", c.seeds_train, "training pool size")->check(CLI::PositiveNumber);
  app.add_option("--seeds-test", c.seeds_test, "test pool size")->check(CLI::PositiveNumber);
  app.add_option("--runs", c.runs, "seeds per study cell")->check(CLI::PositiveNumber);
}

void add_jobs(CLI::App& app, Common& c) {
  app.add_option("--jobs", c.jobs, "parallel member runs")->check(CLI::PositiveNumber);
}

void add_checkpoint(CLI::App& app, Common& c) {
  app.add_option("--checkpoint", c.checkpoint,
                 "trained checkpoint; trains from the config when omitted")
      ->check(CLI::ExistingFile);
}

// Overrides from flags, applied after the file and before validation.
void apply_overrides(const Common& c, ExperimentConfig& config) {
  if (!c.algo.empty()) {
    try {
      config.algo.algorithm = algos::parse_algorithm(c.algo);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }
  if (c.seeds_train) config.train_levels = *c.seeds_train;
  if (c.seeds_test) config.eval.test_levels = *c.seeds_test;
  if (c.runs) config.eval.runs = *c.runs;
  if (c.seed) config.eval.seed = *c.seed;
  if (c.budget) config.algo.updates = algos::updates_for_budget(config.algo, *c.budget);
}

ExperimentConfig resolve_config(const Common& c) {
  ExperimentConfig config =
      c.config_path.empty() ? ExperimentConfig{} : persistence::load_config(c.config_path);
  apply_overrides(c, config);
  config.validate();
  return config;
}

// Output directory plus the manifest that lists every file written there.
class Outputs {
 public:
  Outputs(const Common& c, std::string verb, const ExperimentConfig& config,
          std::uint64_t seed)
      : dir_(c.out_dir), config_text_(persistence::serialize_config(config)) {
    fs::create_directories(dir_);
    manifest_.config_path = c.config_path;
    manifest_.config_hash = persistence::content_hash(config_text_);
    manifest_.seed = seed;
    manifest_.run_id = verb + "-" + manifest_.config_hash + "-" + std::to_string(seed);
    manifest_.build_id = persistence::build_id();
    manifest_.started_at = persistence::utc_timestamp();
    write("config.ini", config_text_);
  }

  const std::string& config_text() const { return config_text_; }
  fs::path path(const std::string& name) const { return dir_ / name; }

  void write(const std::string& name, std::string_view text) {
    const fs::path p = dir_ / name;
    fs::create_directories(p.parent_path());
    persistence::write_file_atomic(p, text);
    manifest_.add_output(name);
  }
  void note(const std::string& name) { manifest_.add_output(name); }

  void finish() {
    manifest_.finished_at = persistence::utc_timestamp();
    manifest_.add_output("manifest.json");
    persistence::save_manifest(manifest_, dir_ / "manifest.json");
  }

 private:
  fs::path dir_;
  std::string config_text_;
  persistence::RunManifest manifest_;
};

std::string log_csv(const std::vector<algos::LogRow>& rows, bool header = true) {
  std::string out = header ? algos::log_header() + "\n" : "";
  for (const auto& r : rows) out += algos::format_log_row(r) + "\n";
  return out;
}

struct Loaded {
  ExperimentConfig config;
  std::unique_ptr<algos::Trainer> trainer;
};

Loaded trainer_from_checkpoint(const std::string& path) {
  const persistence::Checkpoint ckpt = persistence::load_checkpoint(path);
  Loaded l;
  l.config = persistence::parse_config(ckpt.config_text);
  l.trainer = std::make_unique<algos::Trainer>(
      l.config, static_cast<std::uint64_t>(ckpt.counter("seed")));
  l.trainer->restore(ckpt);
  return l;
}

// Trained agent for the analysis verbs: restored from --checkpoint, or
// trained from the resolved config.
Loaded obtain_trainer(const Common& c, std::ostream& out) {
  if (!c.checkpoint.empty()) {
    Loaded l = trainer_from_checkpoint(c.checkpoint);
    apply_overrides(c, l.config);
    l.config.validate();
    return l;
  }
  Loaded l;
  l.config = resolve_config(c);
  l.trainer = std::make_unique<algos::Trainer>(l.config, l.config.eval.seed);
  out << "training " << algos::to_string(l.config.algo.algorithm) << " for "
      << l.config.algo.updates << " updates\n";
  l.trainer->train();
  return l;
}

// ---------------------------------------------------------------------------

int cmd_train(const Common& c, const std::string& resume, std::ostream& out) {
  Loaded l;
  if (!resume.empty()) {
    // The checkpoint's config echo is authoritative; --budget may extend it.
    const persistence::Checkpoint ckpt = persistence::load_checkpoint(resume);
    l.config = persistence::parse_config(ckpt.config_text);
    if (c.budget) l.config.algo.updates = algos::updates_for_budget(l.config.algo, *c.budget);
    l.config.validate();
    l.trainer = std::make_unique<algos::Trainer>(
        l.config, static_cast<std::uint64_t>(ckpt.counter("seed")));
    l.trainer->restore(ckpt);
  } else {
    l.config = resolve_config(c);
    l.trainer = std::make_unique<algos::Trainer>(l.config, l.config.eval.seed);
  }
  algos::Trainer& t = *l.trainer;
  Outputs o(c, "train", l.config, t.seed());

  const fs::path log_path = o.path("train_log.csv");
  std::string log;
  if (!resume.empty() && fs::exists(log_path)) {
    // Keep the rows up to the checkpoint and continue the stream.
    const std::string existing = persistence::read_file(log_path);
    std::istringstream lines(existing);
    std::string line;
    int kept = -1;
    while (std::getline(lines, line) && kept < t.updates_done()) {
      log += line + "\n";
      ++kept;
    }
  } else {
    log = algos::log_header() + "\n";
  }
  t.train([&](const algos::LogRow& row) {
    log += algos::format_log_row(row) + "\n";
    if (row.update % 10 == 0) {
      out << "update " << row.update << " return " << format_double(row.mean_episode_return_train)
          << "\n";
    }
  });
  o.write("train_log.csv", log);
  persistence::save_checkpoint(t.checkpoint(o.config_text()), o.path("checkpoint.bin"));
  o.note("checkpoint.bin");
  o.finish();
  out << "trained " << algos::to_string(l.config.algo.algorithm) << ": " << t.updates_done()
      << " updates, " << t.env_steps() << " env steps\n";
  return kExitOk;
}

int cmd_eval(const Common& c, std::ostream& out) {
  Loaded l = obtain_trainer(c, out);
  const auto train_pool = envs::train_seeds(static_cast<std::size_t>(l.config.train_levels));
  const auto test_pool = envs::test_seeds(static_cast<std::size_t>(l.config.eval.test_levels));
  const auto episodes = static_cast<std::size_t>(l.config.eval.episodes);
  const auto& agent = l.trainer->agent();
  std::vector<analysis::EvalReport> reports = {
      analysis::evaluate(agent, l.config.env, train_pool, episodes, "train"),
      analysis::evaluate(agent, l.config.env, test_pool, episodes, "test")};
  Outputs o(c, "eval", l.config, l.trainer->seed());
  o.write("eval.csv", analysis::eval_table(reports, {train_pool, test_pool}).to_string());
  const std::string summary = analysis::eval_summary_table(reports).to_string();
  o.write("eval_summary.csv", summary);
  o.finish();
  out << summary << "gap," << format_double(analysis::generalization_gap(reports[0], reports[1]))
      << "\n";
  return kExitOk;
}

int cmd_trace(const Common& c, std::size_t episodes, std::ostream& out) {
  Loaded l = obtain_trainer(c, out);
  std::vector<analysis::TraceReport> traces;
  for (const auto seed : envs::test_seeds(episodes)) {
    traces.push_back(analysis::trace_episode(l.trainer->agent(), l.config.env,
                                             envs::generate_level(seed, l.config.env),
                                             l.config.algo.gamma));
  }
  Outputs o(c, "trace", l.config, l.trainer->seed());
  o.write("trace.csv", analysis::trace_table(traces).to_string());
  const std::string fits = analysis::trace_fit_table(traces).to_string();
  o.write("trace_fit.csv", fits);
  o.finish();
  out << fits;
  return kExitOk;
}

int cmd_robustness(const Common& c, std::size_t observations, std::size_t variants,
                   std::ostream& out) {
  Loaded l = obtain_trainer(c, out);
  const auto pool = envs::test_seeds(static_cast<std::size_t>(l.config.eval.test_levels));
  std::vector<envs::LevelSpec> levels;
  for (const auto seed : pool) levels.push_back(envs::generate_level(seed, l.config.env));
  const std::size_t per_level = (observations + levels.size() - 1) / levels.size();
  auto samples = analysis::sample_observations(levels, l.config.env, per_level, l.config.eval.seed);
  if (samples.size() > observations) samples.resize(observations);
  const auto report = analysis::background_swap_robustness(
      l.trainer->agent(), l.config.env, samples, variants, analysis::background_variants(l.config.env));
  Outputs o(c, "robustness", l.config, l.trainer->seed());
  o.write("robustness.csv", analysis::robustness_table(report, samples).to_string());
  const std::string summary = analysis::robustness_summary_table(report).to_string();
  o.write("robustness_summary.csv", summary);
  o.finish();
  out << summary;
  return kExitOk;
}

std::string run_name(const analysis::RunResult& r, std::size_t k) {
  return std::string(algos::to_string(r.algorithm)) + "_run" + std::to_string(k);
}

int cmd_sweep(const Common& c, const std::vector<int>& counts, std::ostream& out) {
  const ExperimentConfig config = resolve_config(c);
  const auto runs = static_cast<std::size_t>(config.eval.runs);
  const auto rows = analysis::level_sweep_study(config, counts, runs, config.eval.seed, c.jobs);
  Outputs o(c, "sweep-levels", config, config.eval.seed);
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.runs.size(); ++k) {
      const std::string base = "runs/levels" + std::to_string(row.levels) + "_run" + std::to_string(k);
      o.write(base + "_log.csv", log_csv(row.runs[k].trainer->log()));
    }
  }
  o.write("sweep_runs.csv", analysis::sweep_runs_table(rows).to_string());
  const std::string table = analysis::sweep_table(rows).to_string();
  o.write("sweep.csv", table);
  o.finish();
  out << table;
  return kExitOk;
}

int cmd_compare(const Common& c, bool ablations, std::ostream& out) {
  const ExperimentConfig config = resolve_config(c);
  std::vector<Algorithm> algorithms = {Algorithm::kPpo, Algorithm::kDaac, Algorithm::kIdaac};
  if (ablations) {
    algorithms.insert(algorithms.end(),
                      {Algorithm::kDvac, Algorithm::kAac, Algorithm::kNaiveDecoupled});
  }
  const auto runs = static_cast<std::size_t>(config.eval.runs);
  const auto rows = analysis::compare_study(config, algorithms, runs, config.eval.seed, c.jobs);
  Outputs o(c, "compare", config, config.eval.seed);
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.runs.size(); ++k) {
      const auto& r = row.runs[k];
      const std::string base = "runs/" + run_name(r, k);
      o.write(base + "_log.csv", log_csv(r.trainer->log()));
      o.write(base + "_eval.csv", analysis::eval_summary_table({r.train, r.test}).to_string());
    }
  }
  o.write("compare_runs.csv", analysis::compare_runs_table(rows).to_string());
  const std::string table = analysis::compare_table(rows).to_string();
  o.write("compare.csv", table);
  o.finish();
  out << table;
  return kExitOk;
}

int cmd_grad_check(const Common& c, std::size_t trials, double tolerance, std::ostream& out) {
  const std::uint64_t seed = c.seed.value_or(1);
  const auto report = analysis::run_gradient_suite(seed, trials);
  for (const auto& k : report.cases) {
    out << k.name << ": " << k.trials << " trials, " << k.checked
        << " gradients, max rel error " << format_double(k.max_error) << "\n";
  }
  const bool ok = report.passed(tolerance);
  out << "grad-check: " << report.trials() << " trials, max rel error "
      << format_double(report.max_error()) << " (tolerance " << format_double(tolerance)
      << ", step " << format_double(report.step) << "): " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitRuntime;
}

int cmd_plot(const Common& c, const std::string& input, analysis::PlotOptions options,
             std::string output, std::ostream& out) {
  const analysis::CsvTable table = analysis::CsvTable::parse(persistence::read_file(input));
  if (options.x_column.empty()) options.x_column = table.header.front();
  if (options.y_columns.empty()) {
    for (const auto& h : table.header) {
      if (h != options.x_column) options.y_columns.push_back(h);
    }
  }
  if (options.title.empty()) options.title = fs::path(input).filename().string();
  const std::string svg = analysis::svg_plot(table, options);
  if (output.empty()) output = (fs::path(c.out_dir) / "plot.svg").string();
  const fs::path path(output);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  persistence::write_file_atomic(path, svg);
  out << "wrote " << output << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Desk-scale decoupled actor-critic laboratory", "daaclab"};
  app.require_subcommand(1, 1);
  Common c;

  auto* train = app.add_subcommand("train", "train one agent; writes checkpoint and log CSV");
  add_common(*train, c);
  std::string resume;
  train->add_option("--resume", resume, "continue from a checkpoint")->check(CLI::ExistingFile);

  auto* eval = app.add_subcommand("eval", "greedy evaluation on the train and test pools");
  add_common(*eval, c);
  add_checkpoint(*eval, c);

  auto* trace = app.add_subcommand("trace", "value/advantage traces on held-out episodes");
  add_common(*trace, c);
  add_checkpoint(*trace, c);
  std::size_t trace_episodes = 20;
  trace->add_option("--episodes", trace_episodes, "held-out levels to trace")
      ->check(CLI::PositiveNumber);

  auto* robust = app.add_subcommand("robustness", "background-swap robustness");
  add_common(*robust, c);
  add_checkpoint(*robust, c);
  std::size_t observations = 1000, variants = 10;
  robust->add_option("--observations", observations, "observations sampled")
      ->check(CLI::PositiveNumber);
  robust->add_option("--variants", variants, "background variants per observation")
      ->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep-levels", "PPO over training-pool sizes");
  add_common(*sweep, c);
  add_jobs(*sweep, c);
  std::vector<int> counts = analysis::kDefaultLevelCounts;
  sweep->add_option("--levels", counts, "ascending level counts")->delimiter(',');

  auto* compare = app.add_subcommand("compare", "ppo/daac/idaac over several seeds");
  add_common(*compare, c);
  add_jobs(*compare, c);
  bool with_ablations = false;
  compare->add_flag("--ablations", with_ablations, "also run dvac, aac and naive_decoupled");

  auto* grad = app.add_subcommand("grad-check", "finite-difference gradient suite");
  add_common(*grad, c);
  std::size_t trials = 4;
  double tolerance = 1e-6;
  grad->add_option("--trials", trials, "trials per case")->check(CLI::PositiveNumber);
  grad->add_option("--tolerance", tolerance, "maximum relative error");

  auto* plot = app.add_subcommand("plot", "CSV to SVG chart");
  add_common(*plot, c);
  std::string input, output;
  analysis::PlotOptions plot_options;
  plot->add_option("--input", input, "CSV file")->required()->check(CLI::ExistingFile);
  plot->add_option("--output", output, "SVG path (default OUT/plot.svg)");
  plot->add_option("--x", plot_options.x_column, "x column (default first)");
  plot->add_option("--y", plot_options.y_columns, "y columns (default all others)")
      ->delimiter(',');
  plot->add_option("--title", plot_options.title, "chart title");
  plot->add_flag("--scatter", plot_options.scatter, "markers instead of lines");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train) return cmd_train(c, resume, out);
    if (*eval) return cmd_eval(c, out);
    if (*trace) return cmd_trace(c, trace_episodes, out);
    if (*robust) return cmd_robustness(c, observations, variants, out);
    if (*sweep) return cmd_sweep(c, counts, out);
    if (*compare) return cmd_compare(c, with_ablations, out);
    if (*grad) return cmd_grad_check(c, trials, tolerance, out);
    if (*plot) return cmd_plot(c, input, plot_options, output, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace daaclab::cli
