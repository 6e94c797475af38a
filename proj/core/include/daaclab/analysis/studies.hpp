#ifndef DAACLAB_ANALYSIS_STUDIES_HPP_
#define DAACLAB_ANALYSIS_STUDIES_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "daaclab/algos/trainer.hpp"
#include "daaclab/analysis/eval.hpp"

namespace daaclab::analysis {

// Mean value_loss over the last ceil(10%) of the rows (at least one).
double final_value_loss(const std::vector<algos::LogRow>& log);

struct RunResult {
  algos::Algorithm algorithm = algos::Algorithm::kPpo;
  std::uint64_t seed = 0;
  int train_levels = 0;
  std::shared_ptr<algos::Trainer> trainer;
  EvalReport train;
  EvalReport test;
  double final_value_loss = 0.0;
};

// Trains one agent and evaluates it greedily on the train pool {1..n} and
// the test pool {10001..}, eval.episodes episodes each.
RunResult run_experiment(const algos::ExperimentConfig& config, std::uint64_t seed);

// Executes tasks 0..count-1 on up to `jobs` threads; each task must touch
// only its own state.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& task);

struct CompareRow {
  algos::Algorithm algorithm = algos::Algorithm::kPpo;
  std::vector<RunResult> runs;
  // Arithmetic means of the per-run report means.
  double train_mean = 0.0;
  double test_mean = 0.0;
  double train_median = 0.0;
  double test_median = 0.0;
  double gap_mean = 0.0;
  double gap_median = 0.0;
};

// Runs each algorithm for `runs` seeds (run k uses run_seed(master, k)) on
// the same protocol. `config.algo.algorithm` is overridden per row.
std::vector<CompareRow> compare_study(const algos::ExperimentConfig& config,
                                      const std::vector<algos::Algorithm>& algorithms,
                                      std::size_t runs, std::uint64_t master_seed,
                                      std::size_t jobs = 1);

struct SweepRow {
  int levels = 0;
  std::vector<RunResult> runs;
  double final_value_loss_median = 0.0;
  double test_median = 0.0;
  double train_median = 0.0;
};

// One PPO-style template trained on each level count. Throws DomainError
// unless the counts are strictly ascending.
std::vector<SweepRow> level_sweep_study(const algos::ExperimentConfig& config,
                                        const std::vector<int>& level_counts,
                                        std::size_t runs, std::uint64_t master_seed,
                                        std::size_t jobs = 1);

inline const std::vector<int> kDefaultLevelCounts = {4, 16, 64, 256};

}  // namespace daaclab::analysis

#endif  // DAACLAB_ANALYSIS_STUDIES_HPP_
