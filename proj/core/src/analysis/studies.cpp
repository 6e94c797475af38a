#include "daaclab/analysis/studies.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "daaclab/analysis/stats.hpp"
#include "daaclab/common/error.hpp"
#include "daaclab/envs/vec_env.hpp"

namespace daaclab::analysis {

double final_value_loss(const std::vector<algos::LogRow>& log) {
  if (log.empty()) return 0.0;
  const std::size_t tail =
      std::max<std::size_t>(1, (log.size() + 9) / 10);
  double total = 0.0;
  for (std::size_t i = log.size() - tail; i < log.size(); ++i) total += log[i].value_loss;
  return total / static_cast<double>(tail);
}

RunResult run_experiment(const algos::ExperimentConfig& config, std::uint64_t seed) {
  RunResult r;
  r.algorithm = config.algo.algorithm;
  r.seed = seed;
  r.train_levels = config.train_levels;
  r.trainer = std::make_shared<algos::Trainer>(config, seed);
  r.trainer->train();
  const auto episodes = static_cast<std::size_t>(config.eval.episodes);
  r.train = evaluate(r.trainer->agent(), config.env,
                     envs::train_seeds(static_cast<std::size_t>(config.train_levels)),
                     episodes, "train");
  r.test = evaluate(r.trainer->agent(), config.env,
                    envs::test_seeds(static_cast<std::size_t>(config.eval.test_levels)),
                    episodes, "test");
  r.final_value_loss = final_value_loss(r.trainer->log());
  return r;
}

void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& task) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

std::vector<RunResult> run_grid(const std::vector<algos::ExperimentConfig>& configs,
                                std::size_t runs, std::uint64_t master_seed,
                                std::size_t jobs) {
  std::vector<RunResult> results(configs.size() * runs);
  parallel_for(results.size(), jobs, [&](std::size_t i) {
    results[i] = run_experiment(configs[i / runs], algos::run_seed(master_seed, i % runs));
  });
  return results;
}

}  // namespace

std::vector<CompareRow> compare_study(const algos::ExperimentConfig& config,
                                      const std::vector<algos::Algorithm>& algorithms,
                                      std::size_t runs, std::uint64_t master_seed,
                                      std::size_t jobs) {
  if (runs == 0) throw DomainError("compare: need at least one run");
  std::vector<algos::ExperimentConfig> configs;
  for (const algos::Algorithm algo : algorithms) {
    algos::ExperimentConfig c = config;
    c.algo.algorithm = algo;
    configs.push_back(c);
  }
  std::vector<RunResult> results = run_grid(configs, runs, master_seed, jobs);
  std::vector<CompareRow> rows;
  for (std::size_t a = 0; a < algorithms.size(); ++a) {
    CompareRow row;
    row.algorithm = algorithms[a];
    std::vector<double> train, test, gap;
    for (std::size_t k = 0; k < runs; ++k) {
      RunResult& r = results[a * runs + k];
      train.push_back(r.train.mean);
      test.push_back(r.test.mean);
      gap.push_back(generalization_gap(r.train, r.test));
      row.runs.push_back(std::move(r));
    }
    row.train_mean = mean(train);
    row.test_mean = mean(test);
    row.gap_mean = mean(gap);
    row.train_median = median(train);
    row.test_median = median(test);
    row.gap_median = median(gap);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepRow> level_sweep_study(const algos::ExperimentConfig& config,
                                        const std::vector<int>& level_counts,
                                        std::size_t runs, std::uint64_t master_seed,
                                        std::size_t jobs) {
  if (runs == 0) throw DomainError("sweep: need at least one run");
  for (std::size_t i = 0; i < level_counts.size(); ++i) {
    if (level_counts[i] < 1 || (i > 0 && level_counts[i] <= level_counts[i - 1])) {
      throw DomainError("sweep: level counts must be positive and ascending");
    }
  }
  std::vector<algos::ExperimentConfig> configs;
  for (const int count : level_counts) {
    algos::ExperimentConfig c = config;
    c.train_levels = count;
    configs.push_back(c);
  }
  std::vector<RunResult> results = run_grid(configs, runs, master_seed, jobs);
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < level_counts.size(); ++i) {
    SweepRow row;
    row.levels = level_counts[i];
    std::vector<double> loss, test, train;
    for (std::size_t k = 0; k < runs; ++k) {
      RunResult& r = results[i * runs + k];
      loss.push_back(r.final_value_loss);
      test.push_back(r.test.mean);
      train.push_back(r.train.mean);
      row.runs.push_back(std::move(r));
    }
    row.final_value_loss_median = median(loss);
    row.test_median = median(test);
    row.train_median = median(train);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace daaclab::analysis
