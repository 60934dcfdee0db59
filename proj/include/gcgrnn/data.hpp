#pragma once

// CSV ingestion, moving-window sample generation, chronological 7:1:2
// splitting, Z-score normalization and a synthetic series generator for
// desk-scale experiments.

#include <cstdint>
#include <string>
#include <vector>

#include "gcgrnn/graph_filters.hpp"
#include "gcgrnn/types.hpp"

namespace gcgrnn {

/// Evenly spaced multi-sensor volume series. Rows are time steps, columns
/// are sensors; values are nonnegative vehicles per interval.
struct TrafficSeries {
  std::vector<std::string> sensor_ids;
  std::vector<std::int64_t> timestamps;  // epoch seconds, strictly increasing
  Mat values;                            // L x N

  Eigen::Index length() const { return values.rows(); }
  Eigen::Index sensors() const { return values.cols(); }
  std::int64_t interval_seconds() const {
    return timestamps.size() > 1 ? timestamps[1] - timestamps[0] : 0;
  }
};

/// One moving-window pair: X holds series rows [start, start+T) and Y holds
/// rows [start+T, start+T+F), both transposed to sensors-by-steps.
struct Sample {
  Mat X;  // N x T
  Mat Y;  // N x F
  Eigen::Index start_index = 0;
};

/// Z-score transform fitted on training data only.
struct Normalizer {
  double mean = 0.0;
  double std = 1.0;

  double apply(double v) const { return (v - mean) / std; }
  double invert(double v) const { return v * std + mean; }
  Mat apply(const Mat& m) const { return ((m.array() - mean) / std).matrix(); }
  Mat invert(const Mat& m) const { return (m.array() * std + mean).matrix(); }
};

/// Chronologically contiguous, disjoint sample partitions.
struct SplitSet {
  std::vector<Sample> train, validation, test;
};

/// Header `timestamp,<id>,...`; one row per interval, epoch-second
/// timestamps, numeric nonnegative cells. Gaps, duplicates and non-numeric
/// cells are rejected with the offending row number.
TrafficSeries load_csv(const std::string& path);

void write_csv(const TrafficSeries& series, const std::string& path);

/// All windows with step size one: exactly L - (T + F) + 1 samples.
std::vector<Sample> make_windows(const TrafficSeries& series, int input_steps,
                                 int forecast_steps);

/// Contiguous prefix/middle/suffix with sizes round(0.7 n), round(0.1 n) and
/// the remainder (round half up), matching the windowed-sample chronology.
SplitSet split_chronological(std::vector<Sample> samples);

/// Mean and population standard deviation over every X and Y entry of the
/// training samples.
Normalizer fit_normalizer(const std::vector<Sample>& train_samples);

struct SynthSpec {
  int n_sensors = 10;
  int n_steps = 2000;
  double period_steps = 24.0;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
  std::int64_t start_epoch = 1514764800;  // 2018-01-01 00:00 UTC
  std::int64_t interval_seconds = 3600;
  std::vector<double> bases;   // empty: seeded uniform [150, 450]
  std::vector<double> phases;  // empty: seeded uniform [0, 2*pi)
};

/// Seeded sinusoidal volumes: sensor i emits base_i * (1 + sin(2*pi*t/period
/// + phase_i)), smoothed by one step of coupling-weighted neighbor averaging,
/// plus Gaussian noise, clipped at zero and rounded to whole vehicles.
TrafficSeries synth_generate(const SynthSpec& spec, const Adjacency& coupling);

TrafficSeries synth_generate(int n_sensors, int n_steps, double period_steps,
                             const Adjacency& coupling, double noise_std,
                             std::uint64_t seed);

}  // namespace gcgrnn
