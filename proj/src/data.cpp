#include "gcgrnn/data.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gcgrnn/errors.hpp"
#include "gcgrnn/rng.hpp"

namespace gcgrnn {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_value(const std::string& field, std::size_t row) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("row " + std::to_string(row) + ": non-numeric cell '" + field + "'");
  }
  return v;
}

}  // namespace

TrafficSeries load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path);
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(path + ": no data rows");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_fields(line);
  if (header.size() < 2 || header[0] != "timestamp") {
    throw ParseError(path + ": header must be 'timestamp,<sensor_id>,...'");
  }

  TrafficSeries series;
  series.sensor_ids.assign(header.begin() + 1, header.end());
  for (std::size_t i = 0; i < series.sensor_ids.size(); ++i) {
    if (series.sensor_ids[i].empty()) {
      throw ParseError(path + ": empty sensor id in header column " + std::to_string(i + 2));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (series.sensor_ids[j] == series.sensor_ids[i]) {
        throw ParseError(path + ": duplicate sensor id '" + series.sensor_ids[i] + "'");
      }
    }
  }
  const std::size_t n = series.sensor_ids.size();

  std::vector<double> cells;
  std::size_t row = 1;  // header was row 1
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != n + 1) {
      throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(n + 1) +
                       " fields, got " + std::to_string(fields.size()));
    }
    const double ts_value = parse_value(fields[0], row);
    if (!std::isfinite(ts_value) || ts_value != std::floor(ts_value) ||
        std::abs(ts_value) > 9e15) {
      throw ParseError("row " + std::to_string(row) + ": timestamp must be integer seconds");
    }
    const auto ts = static_cast<std::int64_t>(ts_value);
    if (!series.timestamps.empty()) {
      if (ts == series.timestamps.back()) {
        throw ParseError("row " + std::to_string(row) + ": duplicate timestamp " +
                         std::to_string(ts));
      }
      if (ts < series.timestamps.back()) {
        throw ParseError("row " + std::to_string(row) + ": timestamps must increase");
      }
    }
    series.timestamps.push_back(ts);
    for (std::size_t j = 1; j < fields.size(); ++j) {
      const double v = parse_value(fields[j], row);
      if (!std::isfinite(v) || v < 0.0) {
        throw ParseError("row " + std::to_string(row) + ": volume must be finite and >= 0");
      }
      cells.push_back(v);
    }
  }
  if (series.timestamps.empty()) {
    throw ParseError(path + ": no data rows");
  }
  if (series.timestamps.size() > 1) {
    const std::int64_t spacing = series.timestamps[1] - series.timestamps[0];
    for (std::size_t i = 2; i < series.timestamps.size(); ++i) {
      if (series.timestamps[i] - series.timestamps[i - 1] != spacing) {
        throw ParseError("row " + std::to_string(i + 2) + ": timestamp gap, expected spacing " +
                         std::to_string(spacing));
      }
    }
  }

  const auto rows = static_cast<Eigen::Index>(series.timestamps.size());
  series.values.resize(rows, static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
      series.values(i, j) = cells[static_cast<std::size_t>(i) * n + j];
    }
  }
  return series;
}

void write_csv(const TrafficSeries& series, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("write_csv: cannot open " + path);
  }
  out << "timestamp";
  for (const auto& id : series.sensor_ids) out << ',' << id;
  out << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < series.length(); ++i) {
    out << series.timestamps[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < series.sensors(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.10g", series.values(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
}

std::vector<Sample> make_windows(const TrafficSeries& series, int input_steps,
                                 int forecast_steps) {
  if (input_steps < 1 || forecast_steps < 1) {
    throw ContractError("make_windows: window lengths must be positive");
  }
  const Eigen::Index window = input_steps + forecast_steps;
  if (series.length() < window) {
    throw ValueError("make_windows: series of length " + std::to_string(series.length()) +
                     " is shorter than one window of " + std::to_string(window));
  }
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(series.length() - window + 1));
  for (Eigen::Index start = 0; start + window <= series.length(); ++start) {
    Sample s;
    s.start_index = start;
    s.X = series.values.middleRows(start, input_steps).transpose();
    s.Y = series.values.middleRows(start + input_steps, forecast_steps).transpose();
    samples.push_back(std::move(s));
  }
  return samples;
}

SplitSet split_chronological(std::vector<Sample> samples) {
  const auto n = samples.size();
  if (n < 3) {
    throw ValueError("split_chronological: need at least 3 samples, got " + std::to_string(n));
  }
  auto round_half_up = [](double v) {
    return static_cast<std::size_t>(std::floor(v + 0.5));
  };
  const std::size_t n_train = round_half_up(0.7 * static_cast<double>(n));
  const std::size_t n_val = round_half_up(0.1 * static_cast<double>(n));
  if (n_train == 0 || n_val == 0 || n_train + n_val >= n) {
    throw ValueError("split_chronological: degenerate split for " + std::to_string(n) +
                     " samples");
  }
  SplitSet out;
  out.train.assign(std::make_move_iterator(samples.begin()),
                   std::make_move_iterator(samples.begin() + n_train));
  out.validation.assign(std::make_move_iterator(samples.begin() + n_train),
                        std::make_move_iterator(samples.begin() + n_train + n_val));
  out.test.assign(std::make_move_iterator(samples.begin() + n_train + n_val),
                  std::make_move_iterator(samples.end()));
  return out;
}

Normalizer fit_normalizer(const std::vector<Sample>& train_samples) {
  if (train_samples.empty()) {
    throw ValueError("fit_normalizer: no training samples");
  }
  double sum = 0.0;
  double count = 0.0;
  for (const auto& s : train_samples) {
    sum += s.X.sum() + s.Y.sum();
    count += static_cast<double>(s.X.size() + s.Y.size());
  }
  const double mean = sum / count;
  double sq = 0.0;
  for (const auto& s : train_samples) {
    sq += (s.X.array() - mean).square().sum() + (s.Y.array() - mean).square().sum();
  }
  const double std_dev = std::sqrt(sq / count);
  if (std_dev <= 0.0) {
    throw ValueError("fit_normalizer: training data is constant (std = 0)");
  }
  return Normalizer{mean, std_dev};
}

TrafficSeries synth_generate(const SynthSpec& spec, const Adjacency& coupling) {
  if (spec.n_sensors < 1 || spec.n_steps < 1) {
    throw ValueError("synth_generate: sensor and step counts must be positive");
  }
  if (spec.period_steps < 2.0) {
    throw ValueError("synth_generate: period must be at least 2 steps");
  }
  if (spec.noise_std < 0.0) {
    throw ValueError("synth_generate: noise std must be nonnegative");
  }
  if (spec.interval_seconds < 1) {
    throw ValueError("synth_generate: interval must be positive");
  }
  if (coupling.size() != spec.n_sensors) {
    throw ShapeError("synth_generate: coupling " + shape_str(coupling.weights()) +
                     " does not match " + std::to_string(spec.n_sensors) + " sensors");
  }
  if (!spec.bases.empty() && spec.bases.size() != static_cast<std::size_t>(spec.n_sensors)) {
    throw ShapeError("synth_generate: need one base per sensor");
  }
  if (!spec.phases.empty() && spec.phases.size() != static_cast<std::size_t>(spec.n_sensors)) {
    throw ShapeError("synth_generate: need one phase per sensor");
  }

  Rng rng(spec.seed);
  const int n = spec.n_sensors;
  std::vector<double> bases = spec.bases;
  std::vector<double> phases = spec.phases;
  if (bases.empty()) {
    bases.resize(n);
    for (auto& b : bases) b = rng.uniform(150.0, 450.0);
  }
  if (phases.empty()) {
    phases.resize(n);
    for (auto& p : phases) p = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }

  // Row-normalized coupling for the one-step neighbor averaging.
  const Mat& w = coupling.weights();
  Eigen::VectorXd row_sums = w.rowwise().sum();
  for (int i = 0; i < n; ++i) {
    if (row_sums(i) <= 0.0) {
      throw ValueError("synth_generate: coupling row " + std::to_string(i) + " sums to zero");
    }
  }

  TrafficSeries series;
  series.sensor_ids.reserve(n);
  for (int i = 0; i < n; ++i) series.sensor_ids.push_back("s" + std::to_string(i + 1));
  series.timestamps.reserve(spec.n_steps);
  series.values.resize(spec.n_steps, n);

  Eigen::VectorXd raw(n);
  for (int t = 0; t < spec.n_steps; ++t) {
    series.timestamps.push_back(spec.start_epoch + static_cast<std::int64_t>(t) * spec.interval_seconds);
    // fmod keeps the angle bit-identical across periods, so a noiseless
    // series is exactly periodic.
    const double angle = 2.0 * std::numbers::pi *
                         std::fmod(static_cast<double>(t), spec.period_steps) / spec.period_steps;
    for (int i = 0; i < n; ++i) {
      raw(i) = bases[static_cast<std::size_t>(i)] *
               (1.0 + std::sin(angle + phases[static_cast<std::size_t>(i)]));
    }
    Eigen::VectorXd smoothed = (w * raw).array() / row_sums.array();
    for (int i = 0; i < n; ++i) {
      double v = smoothed(i);
      if (spec.noise_std > 0.0) v += spec.noise_std * rng.normal();
      // Whole nonnegative vehicle counts.
      series.values(t, i) = std::round(std::max(0.0, v));
    }
  }
  return series;
}

TrafficSeries synth_generate(int n_sensors, int n_steps, double period_steps,
                             const Adjacency& coupling, double noise_std, std::uint64_t seed) {
  SynthSpec spec;
  spec.n_sensors = n_sensors;
  spec.n_steps = n_steps;
  spec.period_steps = period_steps;
  spec.noise_std = noise_std;
  spec.seed = seed;
  return synth_generate(spec, coupling);
}

}  // namespace gcgrnn
