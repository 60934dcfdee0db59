#pragma once

// Batch front end: synthesize data, inspect splits, train any model kind,
// evaluate on the test split, dump single predictions and export learned
// filters. Commands exit 0 on success, 2 on configuration errors, 3 on data
// errors and 4 on training divergence.

#include <cstdint>
#include <string>

#include "gcgrnn/training.hpp"

namespace gcgrnn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitDivergence = 4;

struct DataConfig {
  std::string csv;
  int input_steps = 12;
  int forecast_steps = 12;
  int synth_sensors = 10;
  int synth_steps = 2000;
  double synth_period = 24.0;
  double synth_noise_std = 2.0;
  std::int64_t synth_interval_seconds = 3600;
  std::int64_t synth_start_epoch = 1514764800;
};

struct ModelConfig {
  std::string kind = "gcgrnn";  // gcgrnn | seq2seq-rnn | ha | lr | var
  int hidden = 64;
  int depth = 1;
  bool share_encoder_decoder = false;
  std::string ddgf_init = "uniform";  // uniform | identity_noise
  int var_lag = 3;
};

/// Sectioned key-value file; unknown sections or keys are rejected.
struct RunConfig {
  DataConfig data;
  ModelConfig model;
  TrainConfig train;
  bool max_epochs_given = false;  // absent: 300 for gcgrnn, 100 for seq2seq-rnn
  std::string output_dir = "out";
};

RunConfig load_config(const std::string& path);

/// Epochs budget for the configured model kind.
int resolve_max_epochs(const RunConfig& cfg);

void cmd_synth(const RunConfig& cfg);
void cmd_prepare(const RunConfig& cfg);
void cmd_train(const RunConfig& cfg);
void cmd_eval(const RunConfig& cfg, const std::string& checkpoint_path);
void cmd_predict(const RunConfig& cfg, const std::string& checkpoint_path,
                 std::int64_t start_index);
void cmd_export_adjacency(const std::string& checkpoint_path, const std::string& out_dir);

/// Full command-line entry point; catches errors and maps them to exit codes.
/// GCGRNN_SEED in the environment overrides the config seed; an explicit
/// --seed flag overrides both.
int run(int argc, const char* const* argv);

}  // namespace gcgrnn::cli
