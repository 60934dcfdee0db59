#include "gcgrnn/baselines.hpp"

#include <cmath>

#include "gcgrnn/errors.hpp"

namespace gcgrnn {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;
constexpr double kRidge = 1e-8;

/// Least squares with a small ridge on the normal equations.
Mat ridge_solve(const Mat& design, const Mat& targets) {
  Mat gram = design.transpose() * design;
  gram.diagonal().array() += kRidge;
  Eigen::LDLT<Mat> ldlt(gram);
  if (ldlt.info() != Eigen::Success) {
    throw ValueError("least squares: normal equations not solvable");
  }
  Mat solution = ldlt.solve(design.transpose() * targets);
  if (!solution.allFinite()) {
    throw ValueError("least squares: non-finite solution");
  }
  return solution;
}

}  // namespace

HaModel ha_fit(const TrafficSeries& series, Eigen::Index train_rows) {
  if (train_rows < 1 || train_rows > series.length()) {
    throw ContractError("ha_fit: invalid training row count");
  }
  const std::int64_t interval = series.interval_seconds();
  if (interval < 1 || kSecondsPerDay % interval != 0) {
    throw ValueError("ha_fit: interval must divide one day, got " + std::to_string(interval) +
                     " s");
  }
  const auto slots = static_cast<Eigen::Index>(kSecondsPerDay / interval);

  HaModel model;
  model.interval_seconds = interval;
  model.slot_means = Mat::Zero(slots, series.sensors());
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(slots);
  for (Eigen::Index i = 0; i < train_rows; ++i) {
    const std::int64_t ts = series.timestamps[static_cast<std::size_t>(i)];
    const auto slot = static_cast<Eigen::Index>(((ts % kSecondsPerDay) + kSecondsPerDay) %
                                                kSecondsPerDay / interval);
    model.slot_means.row(slot) += series.values.row(i);
    counts(slot) += 1.0;
  }
  for (Eigen::Index s = 0; s < slots; ++s) {
    if (counts(s) == 0.0) {
      throw ValueError("ha_fit: no observation for time-of-day slot " + std::to_string(s));
    }
    model.slot_means.row(s) /= counts(s);
  }
  return model;
}

Mat ha_predict(const HaModel& model, const std::vector<std::int64_t>& timestamps) {
  Mat out(model.sensors(), static_cast<Eigen::Index>(timestamps.size()));
  for (std::size_t k = 0; k < timestamps.size(); ++k) {
    const auto slot = static_cast<Eigen::Index>(((timestamps[k] % kSecondsPerDay) +
                                                 kSecondsPerDay) %
                                                kSecondsPerDay / model.interval_seconds);
    out.col(static_cast<Eigen::Index>(k)) = model.slot_means.row(slot).transpose();
  }
  return out;
}

LrModel lr_fit(const std::vector<Sample>& train_samples) {
  if (train_samples.empty()) {
    throw ValueError("lr_fit: no training samples");
  }
  const Eigen::Index n = train_samples.front().X.rows();
  const Eigen::Index t = train_samples.front().X.cols();
  const Eigen::Index f = train_samples.front().Y.cols();
  const auto rows = static_cast<Eigen::Index>(train_samples.size());
  if (rows < t + 2) {
    throw ValueError("lr_fit: need at least T+2 samples, got " + std::to_string(rows));
  }

  LrModel model;
  model.weights.reserve(static_cast<std::size_t>(n));
  Mat design(rows, t + 1);
  Mat targets(rows, f);
  for (Eigen::Index sensor = 0; sensor < n; ++sensor) {
    for (Eigen::Index k = 0; k < rows; ++k) {
      design.block(k, 0, 1, t) = train_samples[static_cast<std::size_t>(k)].X.row(sensor);
      design(k, t) = 1.0;
      targets.row(k) = train_samples[static_cast<std::size_t>(k)].Y.row(sensor);
    }
    model.weights.push_back(ridge_solve(design, targets));
  }
  return model;
}

Mat lr_predict(const LrModel& model, const Mat& X) {
  if (X.rows() != model.sensors()) {
    throw ShapeError("lr_predict: input " + shape_str(X) + " does not match " +
                     std::to_string(model.sensors()) + " sensors");
  }
  const Eigen::Index t = model.weights.front().rows() - 1;
  if (X.cols() != t) {
    throw ShapeError("lr_predict: input has " + std::to_string(X.cols()) +
                     " steps, model expects " + std::to_string(t));
  }
  const Eigen::Index f = model.weights.front().cols();
  Mat out(model.sensors(), f);
  Eigen::RowVectorXd features(t + 1);
  for (Eigen::Index sensor = 0; sensor < model.sensors(); ++sensor) {
    features.head(t) = X.row(sensor);
    features(t) = 1.0;
    out.row(sensor) = features * model.weights[static_cast<std::size_t>(sensor)];
  }
  return out;
}

VarModel var_fit(const TrafficSeries& series, Eigen::Index train_rows, int lag) {
  if (lag < 1) {
    throw ContractError("var_fit: lag must be at least 1");
  }
  if (train_rows > series.length()) {
    throw ContractError("var_fit: invalid training row count");
  }
  const Eigen::Index n = series.sensors();
  const Eigen::Index rows = train_rows - lag;
  if (rows < 2) {
    throw ValueError("var_fit: not enough training rows for lag " + std::to_string(lag));
  }

  Mat design(rows, 1 + lag * n);
  Mat targets(rows, n);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const Eigen::Index t = lag + k;
    design(k, 0) = 1.0;
    for (int i = 1; i <= lag; ++i) {
      design.block(k, 1 + (i - 1) * n, 1, n) = series.values.row(t - i);
    }
    targets.row(k) = series.values.row(t);
  }
  const Mat solution = ridge_solve(design, targets);  // (1 + p*N) x N

  VarModel model;
  model.lag = lag;
  model.intercept = solution.row(0).transpose();
  for (int i = 0; i < lag; ++i) {
    // Stored so that x_t += coeffs[i] * x_{t-1-i}.
    model.coeffs.push_back(solution.middleRows(1 + i * n, n).transpose());
  }
  return model;
}

Mat var_predict(const VarModel& model, const Mat& history, int forecast_steps) {
  const Eigen::Index n = model.sensors();
  if (history.rows() != n) {
    throw ShapeError("var_predict: history " + shape_str(history) + " does not match " +
                     std::to_string(n) + " sensors");
  }
  if (history.cols() < model.lag) {
    throw ContractError("var_predict: need at least " + std::to_string(model.lag) +
                        " history columns, got " + std::to_string(history.cols()));
  }
  if (forecast_steps < 1) {
    throw ContractError("var_predict: forecast horizon must be positive");
  }

  // Recent observations, newest first; forecasts are substituted as lags.
  std::vector<Eigen::VectorXd> recent;
  for (int i = 0; i < model.lag; ++i) {
    recent.push_back(history.col(history.cols() - 1 - i));
  }
  Mat out(n, forecast_steps);
  for (int d = 0; d < forecast_steps; ++d) {
    Eigen::VectorXd next = model.intercept;
    for (int i = 0; i < model.lag; ++i) {
      next += model.coeffs[static_cast<std::size_t>(i)] * recent[static_cast<std::size_t>(i)];
    }
    out.col(d) = next;
    for (int i = model.lag - 1; i > 0; --i) {
      recent[static_cast<std::size_t>(i)] = recent[static_cast<std::size_t>(i - 1)];
    }
    recent[0] = next;
  }
  return out;
}

}  // namespace gcgrnn
