#pragma once

// Flat textual container for trained parameters: a versioned header line,
// the model kind, sorted key-value metadata, then named matrices with
// row-major values at full double precision. Byte-identical for identical
// inputs.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gcgrnn/baselines.hpp"
#include "gcgrnn/data.hpp"
#include "gcgrnn/model.hpp"
#include "gcgrnn/types.hpp"

namespace gcgrnn {

struct Checkpoint {
  std::string kind;
  std::map<std::string, std::string> meta;
  std::vector<std::pair<std::string, Mat>> params;

  void set_int(const std::string& key, std::int64_t v);
  void set_real(const std::string& key, double v);
  std::int64_t get_int(const std::string& key) const;
  double get_real(const std::string& key) const;
  bool has(const std::string& key) const { return meta.count(key) != 0; }

  const Mat& matrix(const std::string& name) const;

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);
};

Checkpoint to_checkpoint(SeqModel& model, const Normalizer& norm);
/// Rebuilds the model and recovers the training normalizer.
SeqModel model_from_checkpoint(const Checkpoint& ckpt, Normalizer& norm);

Checkpoint to_checkpoint(const HaModel& model, Eigen::Index n_sensors, int input_steps,
                         int forecast_steps);
HaModel ha_from_checkpoint(const Checkpoint& ckpt);

Checkpoint to_checkpoint(const LrModel& model, int input_steps, int forecast_steps);
LrModel lr_from_checkpoint(const Checkpoint& ckpt);

Checkpoint to_checkpoint(const VarModel& model, int input_steps, int forecast_steps);
VarModel var_from_checkpoint(const Checkpoint& ckpt);

}  // namespace gcgrnn
