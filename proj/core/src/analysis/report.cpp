#include "daaclab/analysis/report.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <sstream>

#include "daaclab/common/error.hpp"
#include "daaclab/common/format.hpp"

namespace daaclab::analysis {

std::string CsvTable::to_string() const {
  std::string out = join(header, ",") + "\n";
  for (const auto& row : rows) out += join(row, ",") + "\n";
  return out;
}

CsvTable CsvTable::parse(std::string_view text) {
  CsvTable t;
  const auto lines = split(text, '\n');
  std::size_t line_no = 0;
  for (const std::string& raw : lines) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    std::vector<std::string> fields = split(line, ',');
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw FormatError(line_no, "csv row has " + std::to_string(fields.size()) +
                                     " fields, header has " +
                                     std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(fields));
  }
  if (t.header.empty()) throw FormatError(0, "empty csv");
  return t;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw DomainError("csv has no column '" + std::string(name) + "'");
}

std::vector<double> CsvTable::numeric_column(std::string_view name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    double v = 0.0;
    const std::string& s = row[c];
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) {
      throw DomainError("csv column '" + std::string(name) + "' is not numeric: '" + s + "'");
    }
    out.push_back(v);
  }
  return out;
}

namespace {

std::string num(double v) { return format_double(v); }

}  // namespace

CsvTable eval_table(const std::vector<EvalReport>& reports,
                    const std::vector<std::vector<std::int64_t>>& pools) {
  CsvTable t{{"pool", "episode", "seed", "return"}, {}};
  for (std::size_t r = 0; r < reports.size(); ++r) {
    const EvalReport& rep = reports[r];
    for (std::size_t k = 0; k < rep.returns.size(); ++k) {
      const auto& pool = pools[r];
      t.rows.push_back({rep.pool, std::to_string(k), std::to_string(pool[k % pool.size()]),
                        num(rep.returns[k])});
    }
  }
  return t;
}

CsvTable eval_summary_table(const std::vector<EvalReport>& reports) {
  CsvTable t{{"pool", "episodes", "mean", "std"}, {}};
  for (const EvalReport& r : reports) {
    t.rows.push_back({r.pool, std::to_string(r.episodes), num(r.mean), num(r.std)});
  }
  return t;
}

CsvTable trace_table(const std::vector<TraceReport>& traces) {
  CsvTable t{{"seed", "t", "position", "action", "value", "advantage", "oracle_value"}, {}};
  for (const TraceReport& tr : traces) {
    for (const TraceStep& s : tr.steps) {
      t.rows.push_back({std::to_string(tr.seed), std::to_string(s.t),
                        std::to_string(s.position), std::to_string(s.action), num(s.value),
                        num(s.advantage), num(s.oracle_value)});
    }
  }
  return t;
}

CsvTable trace_fit_table(const std::vector<TraceReport>& traces) {
  CsvTable t{{"seed", "steps", "value_slope", "value_r2", "advantage_slope", "advantage_r2"},
             {}};
  for (const TraceReport& tr : traces) {
    t.rows.push_back({std::to_string(tr.seed), std::to_string(tr.steps.size()),
                      num(tr.value_fit.slope), num(tr.value_fit.r2),
                      num(tr.advantage_fit.slope), num(tr.advantage_fit.r2)});
  }
  return t;
}

CsvTable robustness_table(const RobustnessReport& report,
                          const std::vector<ObservationSample>& samples) {
  CsvTable t{{"observation", "seed", "l1", "l2", "prediction", "jsd"}, {}};
  for (std::size_t i = 0; i < report.l1.size(); ++i) {
    t.rows.push_back({std::to_string(i), std::to_string(samples[i].level->seed),
                      num(report.l1[i]), num(report.l2[i]), num(report.prediction[i]),
                      num(report.jsd[i])});
  }
  return t;
}

CsvTable robustness_summary_table(const RobustnessReport& r) {
  CsvTable t{{"metric", "mean", "std"}, {}};
  t.rows.push_back({"l1", num(r.l1_summary.mean), num(r.l1_summary.std)});
  t.rows.push_back({"l2", num(r.l2_summary.mean), num(r.l2_summary.std)});
  t.rows.push_back({"prediction", num(r.prediction_summary.mean), num(r.prediction_summary.std)});
  t.rows.push_back({"jsd", num(r.jsd_summary.mean), num(r.jsd_summary.std)});
  return t;
}

CsvTable compare_runs_table(const std::vector<CompareRow>& rows) {
  CsvTable t{{"algo", "run", "seed", "train_mean", "test_mean", "gap"}, {}};
  for (const CompareRow& row : rows) {
    for (std::size_t k = 0; k < row.runs.size(); ++k) {
      const RunResult& r = row.runs[k];
      t.rows.push_back({std::string(algos::to_string(row.algorithm)), std::to_string(k),
                        std::to_string(r.seed), num(r.train.mean), num(r.test.mean),
                        num(generalization_gap(r.train, r.test))});
    }
  }
  return t;
}

CsvTable compare_table(const std::vector<CompareRow>& rows) {
  CsvTable t{{"algo", "runs", "train_mean", "test_mean", "gap_mean", "train_median",
              "test_median", "gap_median"},
             {}};
  for (const CompareRow& row : rows) {
    t.rows.push_back({std::string(algos::to_string(row.algorithm)),
                      std::to_string(row.runs.size()), num(row.train_mean),
                      num(row.test_mean), num(row.gap_mean), num(row.train_median),
                      num(row.test_median), num(row.gap_median)});
  }
  return t;
}

CsvTable sweep_runs_table(const std::vector<SweepRow>& rows) {
  CsvTable t{{"levels", "run", "seed", "final_value_loss", "train_mean", "test_mean"}, {}};
  for (const SweepRow& row : rows) {
    for (std::size_t k = 0; k < row.runs.size(); ++k) {
      const RunResult& r = row.runs[k];
      t.rows.push_back({std::to_string(row.levels), std::to_string(k), std::to_string(r.seed),
                        num(r.final_value_loss), num(r.train.mean), num(r.test.mean)});
    }
  }
  return t;
}

CsvTable sweep_table(const std::vector<SweepRow>& rows) {
  CsvTable t{{"levels", "final_value_loss_median", "train_median", "test_median"}, {}};
  for (const SweepRow& row : rows) {
    t.rows.push_back({std::to_string(row.levels), num(row.final_value_loss_median),
                      num(row.train_median), num(row.test_median)});
  }
  return t;
}

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string svg_plot(const CsvTable& table, const PlotOptions& o) {
  if (o.y_columns.empty()) throw DomainError("plot: no y columns selected");
  const std::vector<double> x = table.numeric_column(o.x_column);
  std::vector<std::vector<double>> ys;
  for (const std::string& c : o.y_columns) ys.push_back(table.numeric_column(c));

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!x.empty()) {
    xmin = *std::min_element(x.begin(), x.end());
    xmax = *std::max_element(x.begin(), x.end());
    ymin = ys[0][0];
    ymax = ys[0][0];
    for (const auto& y : ys) {
      ymin = std::min(ymin, *std::min_element(y.begin(), y.end()));
      ymax = std::max(ymax, *std::max_element(y.begin(), y.end()));
    }
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;

  const double left = 60, right = 20, top = 36, bottom = 40;
  const double w = o.width - left - right, h = o.height - top - bottom;
  const auto px = [&](double v) { return left + (v - xmin) / (xmax - xmin) * w; };
  const auto py = [&](double v) { return top + h - (v - ymin) / (ymax - ymin) * h; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\""
    << o.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << o.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
    << escape(o.title) << "</text>\n";
  s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w << "\" height=\"" << h
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0, fy = ymin + (ymax - ymin) * i / 4.0;
    s << "<text x=\"" << px(fx) << "\" y=\"" << top + h + 14
      << "\" text-anchor=\"middle\">" << format_fixed(fx, 3) << "</text>\n";
    s << "<text x=\"" << left - 4 << "\" y=\"" << py(fy) + 4 << "\" text-anchor=\"end\">"
      << format_fixed(fy, 3) << "</text>\n";
  }
  s << "<text x=\"" << left + w / 2 << "\" y=\"" << o.height - 6
    << "\" text-anchor=\"middle\">" << escape(o.x_column) << "</text>\n";
  for (std::size_t c = 0; c < ys.size(); ++c) {
    const char* color = kPalette[c % std::size(kPalette)];
    if (o.scatter) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        s << "<circle cx=\"" << px(x[i]) << "\" cy=\"" << py(ys[c][i])
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    } else if (!x.empty()) {
      s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < x.size(); ++i) {
        s << (i ? " " : "") << px(x[i]) << "," << py(ys[c][i]);
      }
      s << "\"/>\n";
    }
    s << "<text x=\"" << left + 8 << "\" y=\"" << top + 14 + 14 * c << "\" fill=\"" << color
      << "\">" << escape(o.y_columns[c]) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace daaclab::analysis
