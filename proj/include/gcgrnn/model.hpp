#pragma once

// GRU and graph-convolutional GRU cells plus the encoder-decoder assembly.
// The encoder consumes T input columns; the decoder starts from a zero "GO"
// input and feeds each prediction back as the next input. Cell parameters
// are shared across time steps.
//
// Every step exists in two flavors: a tape flavor used for training and a
// value-only flavor used for inference; tests pin them to each other.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gcgrnn/graph_filters.hpp"
#include "gcgrnn/tape.hpp"
#include "gcgrnn/types.hpp"

namespace gcgrnn {

/// Dense GRU cell weights mapping [h, x] of width H + M to H hidden units.
struct GruParams {
  Mat w_z, w_r, w_h;  // (H+M) x H
  Mat b_z, b_r, b_h;  // 1 x H

  Eigen::Index hidden() const { return w_z.cols(); }
  Eigen::Index input_width() const { return w_z.rows() - w_z.cols(); }
};

/// Graph-convolutional GRU cell: each dense map is replaced by a trainable
/// symmetric filter followed by channel mixing.
struct GcgruParams {
  DdgfFilter filter_z, filter_r, filter_h;  // N x N bases
  Mat theta_z, theta_r, theta_h;            // (H+M) x H
  Mat b_z, b_r, b_h;                        // 1 x H

  Eigen::Index hidden() const { return theta_z.cols(); }
  Eigen::Index input_width() const { return theta_z.rows() - theta_z.cols(); }
  Eigen::Index nodes() const { return filter_z.base.rows(); }
};

struct OutputLayer {
  Mat w_f;  // H x 1
};

Mat gru_step(const GruParams& p, const Mat& h_prev, const Mat& x);
Mat gcgru_step(const GcgruParams& p, const Mat& h_prev, const Mat& x);
Mat project(const OutputLayer& out, const Mat& h);

/// Per-tape handles for one cell's parameters. For graph cells the effective
/// (symmetrized) filters are built once and reused across time steps.
struct BoundGru {
  Vard w_z, w_r, w_h, b_z, b_r, b_h;
};
struct BoundGcgru {
  Vard eff_z, eff_r, eff_h;  // symmetrize(base), shared across steps
  Vard theta_z, theta_r, theta_h, b_z, b_r, b_h;
};
using BoundCell = std::variant<BoundGru, BoundGcgru>;

Vard gru_step(const BoundGru& p, Vard h_prev, Vard x);
Vard gcgru_step(const BoundGcgru& p, Vard h_prev, Vard x);

enum class ModelKind : std::uint8_t { kPlainGru, kGraphConvGru };
enum class DdgfInit : std::uint8_t { kUniform, kIdentityPlusNoise };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

struct SeqModelConfig {
  ModelKind kind = ModelKind::kGraphConvGru;
  int n_sensors = 0;
  int hidden = 64;
  int input_steps = 12;
  int forecast_steps = 12;
  int depth = 1;
  bool share_encoder_decoder = false;
  DdgfInit ddgf_init = DdgfInit::kUniform;
};

/// Encoder-decoder sequence model. Encoder and decoder keep separate
/// parameter sets of identical shape unless share_encoder_decoder is set.
class SeqModel {
 public:
  SeqModel(SeqModelConfig config, std::uint64_t seed);

  const SeqModelConfig& config() const { return config_; }

  /// Named references to every trainable matrix, in a fixed order that
  /// matches bind().
  std::vector<ParamRef> parameters();

  struct Bound {
    std::vector<BoundCell> encoder, decoder;
    Vard w_f;
  };

  /// Registers all parameters as trainable tape leaves, in parameters()
  /// order, so Tape::parameter_gradients() aligns with parameters().
  Bound bind(Taped& tape) const;

  /// Differentiable forward pass: X is N x T, the result is N x F.
  Vard predict(Taped& tape, const Bound& bound, const Mat& X) const;

  /// Inference-only forward pass.
  Mat predict_values(const Mat& X) const;

  /// DDGF bases of the encoder's first layer (graph models only).
  const DdgfFilter& encoder_filter_z() const;
  const DdgfFilter& encoder_filter_r() const;
  const DdgfFilter& encoder_filter_h() const;

 private:
  using CellParams = std::variant<GruParams, GcgruParams>;

  CellParams init_cell(int input_width, std::uint64_t& seed_state) const;
  const std::vector<CellParams>& decoder_cells() const {
    return config_.share_encoder_decoder ? encoder_ : decoder_;
  }

  SeqModelConfig config_;
  std::vector<CellParams> encoder_, decoder_;
  OutputLayer out_;
};

}  // namespace gcgrnn
