#include "gcgrnn/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gcgrnn/errors.hpp"

namespace gcgrnn {

namespace {

constexpr const char* kMagic = "gcgrnn-checkpoint v1";

}  // namespace

void Checkpoint::set_int(const std::string& key, std::int64_t v) {
  meta[key] = std::to_string(v);
}

void Checkpoint::set_real(const std::string& key, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  meta[key] = buf;
}

std::int64_t Checkpoint::get_int(const std::string& key) const {
  auto it = meta.find(key);
  if (it == meta.end()) {
    throw ParseError("checkpoint: missing key '" + key + "'");
  }
  return std::stoll(it->second);
}

double Checkpoint::get_real(const std::string& key) const {
  auto it = meta.find(key);
  if (it == meta.end()) {
    throw ParseError("checkpoint: missing key '" + key + "'");
  }
  return std::stod(it->second);
}

const Mat& Checkpoint::matrix(const std::string& name) const {
  for (const auto& [n, m] : params) {
    if (n == name) return m;
  }
  throw ParseError("checkpoint: missing parameter '" + name + "'");
}

void Checkpoint::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("checkpoint: cannot open " + path + " for writing");
  }
  out << kMagic << '\n';
  out << "kind " << kind << '\n';
  out << "meta " << meta.size() << '\n';
  for (const auto& [key, value] : meta) {
    out << key << ' ' << value << '\n';
  }
  out << "params " << params.size() << '\n';
  char buf[32];
  for (const auto& [name, m] : params) {
    out << "param " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
        out << (j ? " " : "") << buf;
      }
      out << '\n';
    }
  }
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("checkpoint: cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw ParseError("checkpoint: " + path + " is not a '" + kMagic + "' file");
  }

  Checkpoint ckpt;
  std::string token;
  in >> token >> ckpt.kind;
  if (token != "kind") {
    throw ParseError("checkpoint: expected 'kind', got '" + token + "'");
  }
  std::size_t meta_count = 0;
  in >> token >> meta_count;
  if (token != "meta") {
    throw ParseError("checkpoint: expected 'meta', got '" + token + "'");
  }
  for (std::size_t i = 0; i < meta_count; ++i) {
    std::string key, value;
    in >> key >> value;
    ckpt.meta[key] = value;
  }
  std::size_t param_count = 0;
  in >> token >> param_count;
  if (token != "params") {
    throw ParseError("checkpoint: expected 'params', got '" + token + "'");
  }
  for (std::size_t i = 0; i < param_count; ++i) {
    std::string name;
    Eigen::Index rows = 0, cols = 0;
    in >> token >> name >> rows >> cols;
    if (token != "param" || rows < 1 || cols < 1) {
      throw ParseError("checkpoint: malformed parameter block " + std::to_string(i));
    }
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        if (!(in >> m(r, c))) {
          throw ParseError("checkpoint: truncated values for '" + name + "'");
        }
      }
    }
    ckpt.params.emplace_back(std::move(name), std::move(m));
  }
  return ckpt;
}

Checkpoint to_checkpoint(SeqModel& model, const Normalizer& norm) {
  const SeqModelConfig& cfg = model.config();
  Checkpoint ckpt;
  ckpt.kind = to_string(cfg.kind);
  ckpt.set_int("n", cfg.n_sensors);
  ckpt.set_int("h", cfg.hidden);
  ckpt.set_int("t", cfg.input_steps);
  ckpt.set_int("f", cfg.forecast_steps);
  ckpt.set_int("depth", cfg.depth);
  ckpt.set_int("share_encoder_decoder", cfg.share_encoder_decoder ? 1 : 0);
  ckpt.set_real("norm_mean", norm.mean);
  ckpt.set_real("norm_std", norm.std);
  for (const auto& p : model.parameters()) {
    ckpt.params.emplace_back(p.name, *p.value);
  }
  return ckpt;
}

SeqModel model_from_checkpoint(const Checkpoint& ckpt, Normalizer& norm) {
  SeqModelConfig cfg;
  cfg.kind = model_kind_from_string(ckpt.kind);
  cfg.n_sensors = static_cast<int>(ckpt.get_int("n"));
  cfg.hidden = static_cast<int>(ckpt.get_int("h"));
  cfg.input_steps = static_cast<int>(ckpt.get_int("t"));
  cfg.forecast_steps = static_cast<int>(ckpt.get_int("f"));
  cfg.depth = static_cast<int>(ckpt.get_int("depth"));
  cfg.share_encoder_decoder = ckpt.get_int("share_encoder_decoder") != 0;
  norm.mean = ckpt.get_real("norm_mean");
  norm.std = ckpt.get_real("norm_std");

  SeqModel model(cfg, 0);
  auto params = model.parameters();
  if (params.size() != ckpt.params.size()) {
    throw ParseError("checkpoint: expected " + std::to_string(params.size()) +
                     " parameters, file has " + std::to_string(ckpt.params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& [name, value] = ckpt.params[i];
    if (name != params[i].name) {
      throw ParseError("checkpoint: parameter " + std::to_string(i) + " is '" + name +
                       "', expected '" + params[i].name + "'");
    }
    if (value.rows() != params[i].value->rows() || value.cols() != params[i].value->cols()) {
      throw ParseError("checkpoint: parameter '" + name + "' has shape " + shape_str(value) +
                       ", expected " + shape_str(*params[i].value));
    }
    *params[i].value = value;
  }
  return model;
}

Checkpoint to_checkpoint(const HaModel& model, Eigen::Index n_sensors, int input_steps,
                         int forecast_steps) {
  Checkpoint ckpt;
  ckpt.kind = "ha";
  ckpt.set_int("n", n_sensors);
  ckpt.set_int("t", input_steps);
  ckpt.set_int("f", forecast_steps);
  ckpt.set_int("interval_seconds", model.interval_seconds);
  ckpt.params.emplace_back("slot_means", model.slot_means);
  return ckpt;
}

HaModel ha_from_checkpoint(const Checkpoint& ckpt) {
  HaModel model;
  model.interval_seconds = ckpt.get_int("interval_seconds");
  model.slot_means = ckpt.matrix("slot_means");
  return model;
}

Checkpoint to_checkpoint(const LrModel& model, int input_steps, int forecast_steps) {
  Checkpoint ckpt;
  ckpt.kind = "lr";
  ckpt.set_int("n", model.sensors());
  ckpt.set_int("t", input_steps);
  ckpt.set_int("f", forecast_steps);
  for (Eigen::Index s = 0; s < model.sensors(); ++s) {
    ckpt.params.emplace_back("weights." + std::to_string(s),
                             model.weights[static_cast<std::size_t>(s)]);
  }
  return ckpt;
}

LrModel lr_from_checkpoint(const Checkpoint& ckpt) {
  LrModel model;
  const auto n = ckpt.get_int("n");
  for (std::int64_t s = 0; s < n; ++s) {
    model.weights.push_back(ckpt.matrix("weights." + std::to_string(s)));
  }
  return model;
}

Checkpoint to_checkpoint(const VarModel& model, int input_steps, int forecast_steps) {
  Checkpoint ckpt;
  ckpt.kind = "var";
  ckpt.set_int("n", model.sensors());
  ckpt.set_int("t", input_steps);
  ckpt.set_int("f", forecast_steps);
  ckpt.set_int("lag", model.lag);
  ckpt.params.emplace_back("intercept", model.intercept);
  for (int i = 0; i < model.lag; ++i) {
    ckpt.params.emplace_back("coeff." + std::to_string(i + 1),
                             model.coeffs[static_cast<std::size_t>(i)]);
  }
  return ckpt;
}

VarModel var_from_checkpoint(const Checkpoint& ckpt) {
  VarModel model;
  model.lag = static_cast<int>(ckpt.get_int("lag"));
  model.intercept = ckpt.matrix("intercept");
  for (int i = 0; i < model.lag; ++i) {
    model.coeffs.push_back(ckpt.matrix("coeff." + std::to_string(i + 1)));
  }
  return model;
}

}  // namespace gcgrnn
