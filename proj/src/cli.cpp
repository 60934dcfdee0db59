#include "gcgrnn/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "gcgrnn/baselines.hpp"
#include "gcgrnn/checkpoint.hpp"
#include "gcgrnn/data.hpp"
#include "gcgrnn/errors.hpp"
#include "gcgrnn/evaluation.hpp"
#include "gcgrnn/graph_filters.hpp"
#include "gcgrnn/model.hpp"
#include "gcgrnn/rng.hpp"

namespace fs = std::filesystem;

namespace gcgrnn::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' needs an integer, got '" + value + "'");
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' needs a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config: key '" + key + "' needs true/false, got '" + value + "'");
}

void validate(const RunConfig& cfg) {
  if (cfg.data.input_steps < 1 || cfg.data.forecast_steps < 1) {
    throw ConfigError("config: data.t and data.f must be positive");
  }
  if (cfg.data.synth_period < 2.0) {
    throw ConfigError("config: data.synth_period must be at least 2");
  }
  if (cfg.data.synth_sensors < 1 || cfg.data.synth_steps < 1) {
    throw ConfigError("config: synth sensor and step counts must be positive");
  }
  if (cfg.data.synth_noise_std < 0.0) {
    throw ConfigError("config: data.synth_noise_std must be nonnegative");
  }
  if (cfg.data.synth_interval_seconds < 1) {
    throw ConfigError("config: data.synth_interval_seconds must be positive");
  }
  if (cfg.model.kind != "gcgrnn" && cfg.model.kind != "seq2seq-rnn" && cfg.model.kind != "ha" &&
      cfg.model.kind != "lr" && cfg.model.kind != "var") {
    throw ConfigError("config: unknown model.kind '" + cfg.model.kind + "'");
  }
  if (cfg.model.ddgf_init != "uniform" && cfg.model.ddgf_init != "identity_noise") {
    throw ConfigError("config: model.ddgf_init must be uniform or identity_noise");
  }
  if (cfg.model.hidden < 1 || cfg.model.depth < 1 || cfg.model.var_lag < 1) {
    throw ConfigError("config: model.h, model.depth and model.var_lag must be positive");
  }
  if (cfg.train.batch_size < 1 || cfg.train.patience < 1 || cfg.train.max_epochs < 1 ||
      cfg.train.decay_after_epochs < 0) {
    throw ConfigError("config: train values must be positive");
  }
  if (cfg.output_dir.empty()) {
    throw ConfigError("config: output.dir must not be empty");
  }
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open " + path);
  }
  RunConfig cfg;
  std::string section;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "data" && section != "model" && section != "train" && section != "output") {
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown section [" +
                          section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": key outside any section");
    }

    if (section == "data") {
      if (key == "csv") {
        cfg.data.csv = value;
      } else if (key == "t") {
        cfg.data.input_steps = static_cast<int>(parse_int(key, value));
      } else if (key == "f") {
        cfg.data.forecast_steps = static_cast<int>(parse_int(key, value));
      } else if (key == "synth_sensors") {
        cfg.data.synth_sensors = static_cast<int>(parse_int(key, value));
      } else if (key == "synth_steps") {
        cfg.data.synth_steps = static_cast<int>(parse_int(key, value));
      } else if (key == "synth_period") {
        cfg.data.synth_period = parse_real(key, value);
      } else if (key == "synth_noise_std") {
        cfg.data.synth_noise_std = parse_real(key, value);
      } else if (key == "synth_interval_seconds") {
        cfg.data.synth_interval_seconds = parse_int(key, value);
      } else if (key == "synth_start_epoch") {
        cfg.data.synth_start_epoch = parse_int(key, value);
      } else {
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown key data." + key);
      }
    } else if (section == "model") {
      if (key == "kind") {
        cfg.model.kind = value;
      } else if (key == "h") {
        cfg.model.hidden = static_cast<int>(parse_int(key, value));
      } else if (key == "depth") {
        cfg.model.depth = static_cast<int>(parse_int(key, value));
      } else if (key == "share_encoder_decoder") {
        cfg.model.share_encoder_decoder = parse_bool(key, value);
      } else if (key == "ddgf_init") {
        cfg.model.ddgf_init = value;
      } else if (key == "var_lag") {
        cfg.model.var_lag = static_cast<int>(parse_int(key, value));
      } else {
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown key model." + key);
      }
    } else if (section == "train") {
      if (key == "initial_lr") {
        cfg.train.initial_lr = parse_real(key, value);
      } else if (key == "decayed_lr") {
        cfg.train.decayed_lr = parse_real(key, value);
      } else if (key == "decay_after_epochs") {
        cfg.train.decay_after_epochs = static_cast<int>(parse_int(key, value));
      } else if (key == "max_epochs") {
        cfg.train.max_epochs = static_cast<int>(parse_int(key, value));
        cfg.max_epochs_given = true;
      } else if (key == "batch_size") {
        cfg.train.batch_size = static_cast<int>(parse_int(key, value));
      } else if (key == "patience") {
        cfg.train.patience = static_cast<int>(parse_int(key, value));
      } else if (key == "seed") {
        cfg.train.seed = static_cast<std::uint64_t>(parse_int(key, value));
      } else if (key == "clip_norm") {
        cfg.train.clip_norm = parse_real(key, value);
      } else {
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown key train." + key);
      }
    } else {  // output
      if (key == "dir") {
        cfg.output_dir = value;
      } else {
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown key output." + key);
      }
    }
  }
  validate(cfg);
  return cfg;
}

int resolve_max_epochs(const RunConfig& cfg) {
  if (cfg.max_epochs_given) return cfg.train.max_epochs;
  return cfg.model.kind == "seq2seq-rnn" ? 100 : 300;
}

namespace {

void ensure_output_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::is_directory(dir)) {
    throw ConfigError("config: cannot create output directory " + dir);
  }
}

void require_csv(const RunConfig& cfg) {
  if (cfg.data.csv.empty()) {
    throw ConfigError("config: data.csv is required for this command");
  }
  if (!fs::exists(cfg.data.csv)) {
    throw ConfigError("config: data file " + cfg.data.csv + " does not exist");
  }
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

/// Sensor layout for the synthetic coupling graph: seeded positions on a
/// 10 km square, Gaussian kernel, the usual 0.1 sparsity threshold.
Adjacency synth_coupling(int n_sensors, std::uint64_t seed) {
  if (n_sensors == 1) {
    return Adjacency(Mat::Ones(1, 1));
  }
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  Mat x(n_sensors, 1), y(n_sensors, 1);
  for (int i = 0; i < n_sensors; ++i) {
    x(i, 0) = rng.uniform(0.0, 10000.0);
    y(i, 0) = rng.uniform(0.0, 10000.0);
  }
  Mat dist(n_sensors, n_sensors);
  for (int i = 0; i < n_sensors; ++i) {
    for (int j = 0; j < n_sensors; ++j) {
      dist(i, j) = std::hypot(x(i, 0) - x(j, 0), y(i, 0) - y(j, 0));
    }
  }
  return gaussian_adjacency(dist, 0.1);
}

struct PreparedData {
  TrafficSeries series;
  SplitSet split;
  /// Series rows covered by training samples; baselines fit on these.
  Eigen::Index train_rows = 0;
};

PreparedData prepare_data(const RunConfig& cfg) {
  require_csv(cfg);
  PreparedData out;
  out.series = load_csv(cfg.data.csv);
  auto samples = make_windows(out.series, cfg.data.input_steps, cfg.data.forecast_steps);
  out.split = split_chronological(std::move(samples));
  out.train_rows = static_cast<Eigen::Index>(out.split.train.size()) + cfg.data.input_steps +
                   cfg.data.forecast_steps - 1;
  return out;
}

std::vector<std::int64_t> target_timestamps(const TrafficSeries& series, const Sample& sample,
                                            int input_steps) {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(sample.Y.cols()));
  for (Eigen::Index d = 0; d < sample.Y.cols(); ++d) {
    out.push_back(series.timestamps[static_cast<std::size_t>(sample.start_index + input_steps + d)]);
  }
  return out;
}

void check_dims(const Checkpoint& ckpt, const RunConfig& cfg, Eigen::Index data_sensors) {
  if (ckpt.get_int("n") != data_sensors) {
    throw ConfigError("checkpoint holds " + std::to_string(ckpt.get_int("n")) +
                      " sensors but the dataset has " + std::to_string(data_sensors));
  }
  if (ckpt.get_int("t") != cfg.data.input_steps || ckpt.get_int("f") != cfg.data.forecast_steps) {
    throw ConfigError("checkpoint expects T=" + std::to_string(ckpt.get_int("t")) + ", F=" +
                      std::to_string(ckpt.get_int("f")) + " but the config has T=" +
                      std::to_string(cfg.data.input_steps) + ", F=" +
                      std::to_string(cfg.data.forecast_steps));
  }
}

SeqModelConfig model_config(const RunConfig& cfg, Eigen::Index n_sensors) {
  SeqModelConfig mc;
  mc.kind = model_kind_from_string(cfg.model.kind);
  mc.n_sensors = static_cast<int>(n_sensors);
  mc.hidden = cfg.model.hidden;
  mc.input_steps = cfg.data.input_steps;
  mc.forecast_steps = cfg.data.forecast_steps;
  mc.depth = cfg.model.depth;
  mc.share_encoder_decoder = cfg.model.share_encoder_decoder;
  mc.ddgf_init =
      cfg.model.ddgf_init == "uniform" ? DdgfInit::kUniform : DdgfInit::kIdentityPlusNoise;
  return mc;
}

/// Test-split predictions for any checkpoint kind, denormalized scale.
std::vector<Mat> predict_samples(const Checkpoint& ckpt, const PreparedData& data,
                                 const std::vector<Sample>& samples, int input_steps) {
  std::vector<Mat> preds;
  preds.reserve(samples.size());
  if (ckpt.kind == "gcgrnn" || ckpt.kind == "seq2seq-rnn") {
    Normalizer norm;
    const SeqModel model = model_from_checkpoint(ckpt, norm);
    for (const auto& s : samples) {
      preds.push_back(norm.invert(model.predict_values(norm.apply(s.X))));
    }
  } else if (ckpt.kind == "ha") {
    const HaModel model = ha_from_checkpoint(ckpt);
    for (const auto& s : samples) {
      preds.push_back(ha_predict(model, target_timestamps(data.series, s, input_steps)));
    }
  } else if (ckpt.kind == "lr") {
    const LrModel model = lr_from_checkpoint(ckpt);
    for (const auto& s : samples) {
      preds.push_back(lr_predict(model, s.X));
    }
  } else if (ckpt.kind == "var") {
    const VarModel model = var_from_checkpoint(ckpt);
    const int f = static_cast<int>(samples.front().Y.cols());
    for (const auto& s : samples) {
      if (s.X.cols() < model.lag) {
        throw ConfigError("var checkpoint needs " + std::to_string(model.lag) +
                          " history steps but T=" + std::to_string(s.X.cols()));
      }
      preds.push_back(var_predict(model, s.X.rightCols(model.lag), f));
    }
  } else {
    throw ConfigError("unsupported checkpoint kind '" + ckpt.kind + "'");
  }
  return preds;
}

}  // namespace

void cmd_synth(const RunConfig& cfg) {
  if (cfg.data.csv.empty()) {
    throw ConfigError("config: data.csv must name the file to write");
  }
  SynthSpec spec;
  spec.n_sensors = cfg.data.synth_sensors;
  spec.n_steps = cfg.data.synth_steps;
  spec.period_steps = cfg.data.synth_period;
  spec.noise_std = cfg.data.synth_noise_std;
  spec.seed = cfg.train.seed;
  spec.interval_seconds = cfg.data.synth_interval_seconds;
  spec.start_epoch = cfg.data.synth_start_epoch;
  const Adjacency coupling = synth_coupling(spec.n_sensors, spec.seed);
  const TrafficSeries series = synth_generate(spec, coupling);
  write_csv(series, cfg.data.csv);
  std::cout << "wrote " << cfg.data.csv << ": " << series.length() << " rows, "
            << series.sensors() << " sensors\n";
}

void cmd_prepare(const RunConfig& cfg) {
  const PreparedData data = prepare_data(cfg);
  const Normalizer norm = fit_normalizer(data.split.train);
  ensure_output_dir(cfg.output_dir);
  const std::string path = out_path(cfg, "prepare.csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("prepare: cannot open " + path);
  }
  char buf[32];
  out << "key,value\n";
  out << "rows," << data.series.length() << '\n';
  out << "sensors," << data.series.sensors() << '\n';
  out << "interval_seconds," << data.series.interval_seconds() << '\n';
  out << "samples," << data.split.train.size() + data.split.validation.size() +
                           data.split.test.size()
      << '\n';
  out << "train_samples," << data.split.train.size() << '\n';
  out << "validation_samples," << data.split.validation.size() << '\n';
  out << "test_samples," << data.split.test.size() << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g", norm.mean);
  out << "train_mean," << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g", norm.std);
  out << "train_std," << buf << '\n';
  std::cout << "samples: " << data.split.train.size() << " train, "
            << data.split.validation.size() << " validation, " << data.split.test.size()
            << " test\n";
}

void cmd_train(const RunConfig& cfg) {
  const PreparedData data = prepare_data(cfg);
  ensure_output_dir(cfg.output_dir);
  const int t = cfg.data.input_steps;
  const int f = cfg.data.forecast_steps;

  Checkpoint ckpt;
  if (cfg.model.kind == "gcgrnn" || cfg.model.kind == "seq2seq-rnn") {
    SeqModel model(model_config(cfg, data.series.sensors()), cfg.train.seed);
    TrainConfig tc = cfg.train;
    tc.max_epochs = resolve_max_epochs(cfg);
    const TrainResult result = train(model, data.split, tc);
    write_history_csv(result.history, out_path(cfg, "history.csv"));
    ckpt = to_checkpoint(model, result.normalizer);
    std::cout << "best epoch " << result.history.best_epoch << ", validation MAE "
              << result.history.best_val_mae << '\n';
  } else if (cfg.model.kind == "ha") {
    ckpt = to_checkpoint(ha_fit(data.series, data.train_rows), data.series.sensors(), t, f);
  } else if (cfg.model.kind == "lr") {
    ckpt = to_checkpoint(lr_fit(data.split.train), t, f);
  } else {
    ckpt = to_checkpoint(var_fit(data.series, data.train_rows, cfg.model.var_lag), t, f);
  }
  const std::string path = out_path(cfg, "model.ckpt");
  ckpt.save(path);
  std::cout << "wrote " << path << '\n';
}

void cmd_eval(const RunConfig& cfg, const std::string& checkpoint_path) {
  const Checkpoint ckpt = Checkpoint::load(checkpoint_path);
  const PreparedData data = prepare_data(cfg);
  check_dims(ckpt, cfg, data.series.sensors());
  ensure_output_dir(cfg.output_dir);

  const std::vector<Sample>& test = data.split.test;
  const std::vector<Mat> preds = predict_samples(ckpt, data, test, cfg.data.input_steps);
  std::vector<Mat> truth;
  truth.reserve(test.size());
  std::vector<std::vector<std::int64_t>> stamps;
  stamps.reserve(test.size());
  for (const auto& s : test) {
    truth.push_back(s.Y);
    stamps.push_back(target_timestamps(data.series, s, cfg.data.input_steps));
  }

  EvalReport report = compute_metrics(preds, truth);
  try {
    report.per_hour_weekday = per_hour_weekday_mae(preds, truth, stamps);
  } catch (const ValueError&) {
    // Test window has no weekday targets; emit an all-empty table.
    report.per_hour_weekday = HourTable{};
  }
  write_report_csv(report, out_path(cfg, "report.csv"));
  write_per_sensor_csv(report, data.series.sensor_ids, out_path(cfg, "per_sensor.csv"));
  write_per_hour_csv(*report.per_hour_weekday, out_path(cfg, "per_hour_weekday.csv"));
  std::cout << "test MAE " << report.overall.mae << ", RMSE " << report.overall.rmse
            << ", MAPE " << report.overall.mape * 100.0 << "%\n";
}

void cmd_predict(const RunConfig& cfg, const std::string& checkpoint_path,
                 std::int64_t start_index) {
  const Checkpoint ckpt = Checkpoint::load(checkpoint_path);
  const PreparedData data = prepare_data(cfg);
  check_dims(ckpt, cfg, data.series.sensors());
  ensure_output_dir(cfg.output_dir);

  const int t = cfg.data.input_steps;
  const int f = cfg.data.forecast_steps;
  const Eigen::Index max_start = data.series.length() - t - f;
  if (start_index < 0 || start_index > max_start) {
    throw ConfigError("start index " + std::to_string(start_index) + " outside [0, " +
                      std::to_string(max_start) + "]");
  }
  Sample sample;
  sample.start_index = start_index;
  sample.X = data.series.values.middleRows(start_index, t).transpose();
  sample.Y = data.series.values.middleRows(start_index + t, f).transpose();

  const std::vector<Mat> preds = predict_samples(ckpt, data, {sample}, t);
  const auto stamps = target_timestamps(data.series, sample, t);

  const std::string path = out_path(cfg, "predict.csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("predict: cannot open " + path);
  }
  char buf[32];
  out << "sensor_id,step,timestamp,actual,predicted\n";
  for (int d = 0; d < f; ++d) {
    for (Eigen::Index s = 0; s < data.series.sensors(); ++s) {
      out << data.series.sensor_ids[static_cast<std::size_t>(s)] << ',' << d + 1 << ','
          << stamps[static_cast<std::size_t>(d)] << ',';
      std::snprintf(buf, sizeof(buf), "%.10g", sample.Y(s, d));
      out << buf << ',';
      std::snprintf(buf, sizeof(buf), "%.10g", preds.front()(s, d));
      out << buf << '\n';
    }
  }
  std::cout << "wrote " << path << '\n';
}

void cmd_export_adjacency(const std::string& checkpoint_path, const std::string& out_dir) {
  const Checkpoint ckpt = Checkpoint::load(checkpoint_path);
  if (ckpt.kind != "gcgrnn") {
    throw ConfigError("export-adjacency: checkpoint kind '" + ckpt.kind +
                      "' has no learned filters");
  }
  ensure_output_dir(out_dir);
  const char* names[3] = {"ddgf_z", "ddgf_r", "ddgf_h"};
  const char* files[3] = {"adjacency_z.csv", "adjacency_r.csv", "adjacency_h.csv"};
  for (int k = 0; k < 3; ++k) {
    const DdgfFilter filter{ckpt.matrix(std::string("encoder.l0.") + names[k])};
    const std::string path = (fs::path(out_dir) / files[k]).string();
    export_filter(filter.effective(), path);
    std::cout << "wrote " << path << '\n';
  }
}

int run(int argc, const char* const* argv) {
  CLI::App app{"network-wide multi-step traffic volume forecasting"};
  app.require_subcommand(1);

  std::string config_path;
  std::string checkpoint_path;
  std::string export_dir = ".";
  std::int64_t start_index = 0;
  std::optional<std::int64_t> seed_flag;

  auto add_config = [&config_path](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration file")->required();
  };

  CLI::App* synth = app.add_subcommand("synth", "write a synthetic dataset CSV");
  add_config(synth);
  CLI::App* prepare = app.add_subcommand("prepare", "summarize windows, split and normalizer");
  add_config(prepare);
  CLI::App* train_cmd = app.add_subcommand("train", "fit the configured model");
  add_config(train_cmd);
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on the test split");
  add_config(eval_cmd);
  eval_cmd->add_option("--checkpoint", checkpoint_path, "trained model file")->required();
  CLI::App* predict = app.add_subcommand("predict", "dump one sample's predictions");
  add_config(predict);
  predict->add_option("--checkpoint", checkpoint_path, "trained model file")->required();
  predict->add_option("--start-index", start_index, "window start row")->required();
  CLI::App* export_cmd =
      app.add_subcommand("export-adjacency", "write learned filters as CSV");
  export_cmd->add_option("--checkpoint", checkpoint_path, "trained model file")->required();
  export_cmd->add_option("--out", export_dir, "output directory");

  for (CLI::App* cmd : {synth, prepare, train_cmd, eval_cmd, predict}) {
    cmd->add_option("--seed", seed_flag, "override the config seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (export_cmd->parsed()) {
      cmd_export_adjacency(checkpoint_path, export_dir);
      return kExitOk;
    }
    RunConfig cfg = load_config(config_path);
    if (const char* env_seed = std::getenv("GCGRNN_SEED")) {
      cfg.train.seed = static_cast<std::uint64_t>(parse_int("GCGRNN_SEED", env_seed));
    }
    if (seed_flag.has_value()) {
      cfg.train.seed = static_cast<std::uint64_t>(*seed_flag);
    }
    if (synth->parsed()) {
      cmd_synth(cfg);
    } else if (prepare->parsed()) {
      cmd_prepare(cfg);
    } else if (train_cmd->parsed()) {
      cmd_train(cfg);
    } else if (eval_cmd->parsed()) {
      cmd_eval(cfg, checkpoint_path);
    } else if (predict->parsed()) {
      cmd_predict(cfg, checkpoint_path, start_index);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace gcgrnn::cli
