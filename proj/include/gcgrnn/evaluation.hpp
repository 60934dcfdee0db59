#pragma once

// MAE / RMSE / MAPE with zero-truth exclusion, plus per-step, per-sensor and
// weekday per-hour breakdowns. Entries whose ground truth is exactly zero are
// removed from every metric; denominators count included entries only.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gcgrnn/types.hpp"

namespace gcgrnn {

struct MetricRow {
  double mae = 0.0;
  double rmse = 0.0;
  double mape = 0.0;  // ratio, not percent
  std::int64_t included = 0;
  std::int64_t total = 0;

  double excluded_zero_fraction() const {
    return total == 0 ? 0.0 : static_cast<double>(total - included) / static_cast<double>(total);
  }
};

/// MAE at the first, middle (step min(6, F)) and last prediction steps for
/// one wall-clock hour, weekdays only. Cells without data stay empty.
struct HourRow {
  std::optional<double> mae_first, mae_mid, mae_last;
  double mean_volume = 0.0;
  std::int64_t entries = 0;
};

using HourTable = std::array<HourRow, 24>;

struct EvalReport {
  MetricRow overall;
  std::vector<MetricRow> per_step;    // F rows
  std::vector<MetricRow> per_sensor;  // N rows
  std::optional<HourTable> per_hour_weekday;
};

/// pred and truth hold one N x F matrix per test sample.
EvalReport compute_metrics(const std::vector<Mat>& pred, const std::vector<Mat>& truth);

/// target_timestamps[i][d] is the epoch time of sample i's d-th target step.
HourTable per_hour_weekday_mae(const std::vector<Mat>& pred, const std::vector<Mat>& truth,
                               const std::vector<std::vector<std::int64_t>>& target_timestamps);

/// Overall + per-step rows: scope,mae,rmse,mape,included,excluded_zero_fraction.
void write_report_csv(const EvalReport& report, const std::string& path);

void write_per_sensor_csv(const EvalReport& report, const std::vector<std::string>& sensor_ids,
                          const std::string& path);

/// Empty cells are written as NA.
void write_per_hour_csv(const HourTable& table, const std::string& path);

}  // namespace gcgrnn
