#pragma once

// Classical baselines: historical average by time-of-day slot, per-sensor
// linear regression from the T-step history to the F-step target, and vector
// autoregression with recursive multi-step forecasting. All operate on raw
// (unnormalized) volumes and are fit on training data only.

#include <cstdint>
#include <vector>

#include "gcgrnn/data.hpp"
#include "gcgrnn/types.hpp"

namespace gcgrnn {

/// Mean volume per time-of-day slot per sensor; predictions ignore the
/// recent history entirely, so its error curve is flat across horizons.
struct HaModel {
  std::int64_t interval_seconds = 0;
  Mat slot_means;  // S x N, S = 86400 / interval_seconds

  Eigen::Index slots() const { return slot_means.rows(); }
  Eigen::Index sensors() const { return slot_means.cols(); }
};

/// One (T+1) x F weight matrix per sensor; the last row is the intercept.
struct LrModel {
  std::vector<Mat> weights;

  Eigen::Index sensors() const { return static_cast<Eigen::Index>(weights.size()); }
};

/// x_t = c + sum_i C_i x_{t-i}, fit by ridge-stabilized least squares.
struct VarModel {
  int lag = 0;
  std::vector<Mat> coeffs;  // lag matrices, each N x N
  Mat intercept;            // N x 1

  Eigen::Index sensors() const { return intercept.rows(); }
};

/// Fits slot means on the first `train_rows` rows of the series.
HaModel ha_fit(const TrafficSeries& series, Eigen::Index train_rows);

/// One column of slot means per requested timestamp; N x |timestamps|.
Mat ha_predict(const HaModel& model, const std::vector<std::int64_t>& timestamps);

LrModel lr_fit(const std::vector<Sample>& train_samples);

/// N x F prediction from one sample's N x T history.
Mat lr_predict(const LrModel& model, const Mat& X);

/// Fits on the first `train_rows` rows of the series.
VarModel var_fit(const TrafficSeries& series, Eigen::Index train_rows, int lag);

/// history is N x p with columns ordered oldest to newest; returns N x F.
Mat var_predict(const VarModel& model, const Mat& history, int forecast_steps);

}  // namespace gcgrnn
