#ifndef DAACLAB_ANALYSIS_REPORT_HPP_
#define DAACLAB_ANALYSIS_REPORT_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "daaclab/analysis/diagnostics.hpp"
#include "daaclab/analysis/eval.hpp"
#include "daaclab/analysis/studies.hpp"

namespace daaclab::analysis {

// Comma-separated table without quoting; fields never contain commas.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;
  // Throws FormatError(line, ...) on ragged rows or an empty input.
  static CsvTable parse(std::string_view text);
  // Throws DomainError for an unknown column.
  std::size_t column(std::string_view name) const;
  std::vector<double> numeric_column(std::string_view name) const;
};

// pool,episode,seed,return
CsvTable eval_table(const std::vector<EvalReport>& reports,
                    const std::vector<std::vector<std::int64_t>>& pools);
// pool,episodes,mean,std
CsvTable eval_summary_table(const std::vector<EvalReport>& reports);
// seed,t,position,action,value,advantage,oracle_value
CsvTable trace_table(const std::vector<TraceReport>& traces);
// seed,steps,value_slope,value_r2,advantage_slope,advantage_r2
CsvTable trace_fit_table(const std::vector<TraceReport>& traces);
// observation,seed,l1,l2,prediction,jsd
CsvTable robustness_table(const RobustnessReport& report,
                          const std::vector<ObservationSample>& samples);
// metric,mean,std
CsvTable robustness_summary_table(const RobustnessReport& report);
// algo,run,seed,train_mean,test_mean,gap
CsvTable compare_runs_table(const std::vector<CompareRow>& rows);
// algo,runs,train_mean,test_mean,gap_mean,train_median,test_median,gap_median
CsvTable compare_table(const std::vector<CompareRow>& rows);
// levels,run,seed,final_value_loss,train_mean,test_mean
CsvTable sweep_runs_table(const std::vector<SweepRow>& rows);
// levels,final_value_loss_median,train_median,test_median
CsvTable sweep_table(const std::vector<SweepRow>& rows);

struct PlotOptions {
  std::string title;
  std::string x_column;
  std::vector<std::string> y_columns;
  bool scatter = false;
  int width = 640;
  int height = 400;
};

// Single-file SVG line or scatter chart of the chosen columns.
std::string svg_plot(const CsvTable& table, const PlotOptions& options);

}  // namespace daaclab::analysis

#endif  // DAACLAB_ANALYSIS_REPORT_HPP_
