#include "gcgrnn/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gcgrnn/errors.hpp"

namespace gcgrnn {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

struct Accumulator {
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  double ratio_sum = 0.0;
  std::int64_t included = 0;
  std::int64_t total = 0;

  void add(double truth, double pred) {
    ++total;
    if (truth == 0.0) return;
    const double err = std::abs(pred - truth);
    abs_sum += err;
    sq_sum += err * err;
    ratio_sum += err / truth;
    ++included;
  }

  MetricRow row() const {
    MetricRow r;
    r.included = included;
    r.total = total;
    if (included > 0) {
      const auto count = static_cast<double>(included);
      r.mae = abs_sum / count;
      r.rmse = std::sqrt(sq_sum / count);
      r.mape = ratio_sum / count;
    }
    return r;
  }
};

bool is_weekday(std::int64_t ts) {
  const std::int64_t days = ts >= 0 ? ts / kSecondsPerDay : (ts - kSecondsPerDay + 1) / kSecondsPerDay;
  const int dow = static_cast<int>(((days + 4) % 7 + 7) % 7);  // 0 = Sunday
  return dow >= 1 && dow <= 5;
}

int hour_of_day(std::int64_t ts) {
  return static_cast<int>(((ts % kSecondsPerDay) + kSecondsPerDay) % kSecondsPerDay / 3600);
}

void format_field(std::ofstream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  out << buf;
}

}  // namespace

EvalReport compute_metrics(const std::vector<Mat>& pred, const std::vector<Mat>& truth) {
  if (pred.size() != truth.size() || pred.empty()) {
    throw ContractError("compute_metrics: prediction and truth sample counts differ or are empty");
  }
  const Eigen::Index n = truth.front().rows();
  const Eigen::Index f = truth.front().cols();

  Accumulator overall;
  std::vector<Accumulator> per_step(static_cast<std::size_t>(f));
  std::vector<Accumulator> per_sensor(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const Mat& t = truth[i];
    const Mat& p = pred[i];
    if (t.rows() != n || t.cols() != f || p.rows() != n || p.cols() != f) {
      throw ShapeError("compute_metrics: sample " + std::to_string(i) + " has shape " +
                       shape_str(p) + " vs " + shape_str(t) + ", expected " + shape_str(n, f));
    }
    if ((t.array() < 0.0).any()) {
      throw ValueError("compute_metrics: negative ground truth in sample " + std::to_string(i));
    }
    for (Eigen::Index d = 0; d < f; ++d) {
      for (Eigen::Index s = 0; s < n; ++s) {
        overall.add(t(s, d), p(s, d));
        per_step[static_cast<std::size_t>(d)].add(t(s, d), p(s, d));
        per_sensor[static_cast<std::size_t>(s)].add(t(s, d), p(s, d));
      }
    }
  }
  if (overall.included == 0) {
    throw ValueError("compute_metrics: every entry has zero ground truth");
  }

  EvalReport report;
  report.overall = overall.row();
  for (const auto& acc : per_step) report.per_step.push_back(acc.row());
  for (const auto& acc : per_sensor) report.per_sensor.push_back(acc.row());
  return report;
}

HourTable per_hour_weekday_mae(const std::vector<Mat>& pred, const std::vector<Mat>& truth,
                               const std::vector<std::vector<std::int64_t>>& target_timestamps) {
  if (pred.size() != truth.size() || pred.size() != target_timestamps.size() || pred.empty()) {
    throw ContractError("per_hour_weekday_mae: input sizes differ or are empty");
  }
  const Eigen::Index f = truth.front().cols();
  const Eigen::Index mid = std::min<Eigen::Index>(6, f);
  const std::array<Eigen::Index, 3> steps{1, mid, f};

  std::array<std::array<Accumulator, 3>, 24> buckets{};
  std::array<double, 24> volume_sum{};
  std::array<std::int64_t, 24> volume_count{};
  std::int64_t weekday_entries = 0;

  for (std::size_t i = 0; i < truth.size(); ++i) {
    const Mat& t = truth[i];
    const Mat& p = pred[i];
    const auto& ts = target_timestamps[i];
    if (static_cast<Eigen::Index>(ts.size()) != f) {
      throw ContractError("per_hour_weekday_mae: sample " + std::to_string(i) +
                          " has wrong timestamp count");
    }
    for (Eigen::Index d = 0; d < f; ++d) {
      const std::int64_t when = ts[static_cast<std::size_t>(d)];
      if (!is_weekday(when)) continue;
      const int hour = hour_of_day(when);
      for (Eigen::Index s = 0; s < t.rows(); ++s) {
        ++weekday_entries;
        volume_sum[static_cast<std::size_t>(hour)] += t(s, d);
        ++volume_count[static_cast<std::size_t>(hour)];
        for (std::size_t k = 0; k < steps.size(); ++k) {
          if (d + 1 == steps[k]) {
            buckets[static_cast<std::size_t>(hour)][k].add(t(s, d), p(s, d));
          }
        }
      }
    }
  }
  if (weekday_entries == 0) {
    throw ValueError("per_hour_weekday_mae: no weekday targets in the evaluation window");
  }

  HourTable table{};
  for (int hour = 0; hour < 24; ++hour) {
    auto& row = table[static_cast<std::size_t>(hour)];
    const auto& acc = buckets[static_cast<std::size_t>(hour)];
    if (acc[0].included > 0) row.mae_first = acc[0].row().mae;
    if (acc[1].included > 0) row.mae_mid = acc[1].row().mae;
    if (acc[2].included > 0) row.mae_last = acc[2].row().mae;
    row.entries = volume_count[static_cast<std::size_t>(hour)];
    if (row.entries > 0) {
      row.mean_volume = volume_sum[static_cast<std::size_t>(hour)] /
                        static_cast<double>(row.entries);
    }
  }
  return table;
}

void write_report_csv(const EvalReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("write_report_csv: cannot open " + path);
  }
  out << "scope,mae,rmse,mape,included,excluded_zero_fraction\n";
  auto write_row = [&out](const std::string& scope, const MetricRow& row) {
    out << scope << ',';
    format_field(out, row.mae);
    out << ',';
    format_field(out, row.rmse);
    out << ',';
    format_field(out, row.mape);
    out << ',' << row.included << ',';
    format_field(out, row.excluded_zero_fraction());
    out << '\n';
  };
  write_row("overall", report.overall);
  for (std::size_t d = 0; d < report.per_step.size(); ++d) {
    write_row("step_" + std::to_string(d + 1), report.per_step[d]);
  }
}

void write_per_sensor_csv(const EvalReport& report, const std::vector<std::string>& sensor_ids,
                          const std::string& path) {
  if (sensor_ids.size() != report.per_sensor.size()) {
    throw ContractError("write_per_sensor_csv: sensor id count mismatch");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("write_per_sensor_csv: cannot open " + path);
  }
  out << "sensor_id,mae,rmse,mape,included,excluded_zero_fraction\n";
  for (std::size_t s = 0; s < sensor_ids.size(); ++s) {
    const MetricRow& row = report.per_sensor[s];
    out << sensor_ids[s] << ',';
    format_field(out, row.mae);
    out << ',';
    format_field(out, row.rmse);
    out << ',';
    format_field(out, row.mape);
    out << ',' << row.included << ',';
    format_field(out, row.excluded_zero_fraction());
    out << '\n';
  }
}

void write_per_hour_csv(const HourTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("write_per_hour_csv: cannot open " + path);
  }
  out << "hour,mae_step_first,mae_step_mid,mae_step_last,mean_volume,entries\n";
  auto cell = [&out](const std::optional<double>& v) {
    if (v.has_value()) {
      format_field(out, *v);
    } else {
      out << "NA";
    }
  };
  for (int hour = 0; hour < 24; ++hour) {
    const auto& row = table[static_cast<std::size_t>(hour)];
    out << hour << ',';
    cell(row.mae_first);
    out << ',';
    cell(row.mae_mid);
    out << ',';
    cell(row.mae_last);
    out << ',';
    if (row.entries > 0) {
      format_field(out, row.mean_volume);
    } else {
      out << "NA";
    }
    out << ',' << row.entries << '\n';
  }
}

}  // namespace gcgrnn
