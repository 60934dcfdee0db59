#include "gcgrnn/model.hpp"

#include <cmath>

#include "gcgrnn/errors.hpp"
#include "gcgrnn/rng.hpp"

namespace gcgrnn {

namespace {

void check_step_shapes(Eigen::Index h_rows, Eigen::Index h_cols, Eigen::Index x_rows,
                       Eigen::Index x_cols, Eigen::Index map_rows, Eigen::Index map_cols,
                       const char* op) {
  if (x_rows != h_rows) {
    throw ShapeError(std::string(op) + ": input rows " + std::to_string(x_rows) +
                     " do not match state rows " + std::to_string(h_rows));
  }
  if (map_rows != h_cols + x_cols || map_cols != h_cols) {
    throw ShapeError(std::string(op) + ": weights " + shape_str(map_rows, map_cols) +
                     " do not map [" + shape_str(h_rows, h_cols) + ", " +
                     shape_str(x_rows, x_cols) + "]");
  }
}

Mat sigmoid_values(const Mat& m) {
  return (1.0 / (1.0 + (-m.array()).exp())).matrix();
}

Mat concat(const Mat& a, const Mat& b) {
  Mat out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

}  // namespace

Mat gru_step(const GruParams& p, const Mat& h_prev, const Mat& x) {
  check_step_shapes(h_prev.rows(), h_prev.cols(), x.rows(), x.cols(), p.w_z.rows(),
                    p.w_z.cols(), "gru_step");
  const Mat hx = concat(h_prev, x);
  const Mat z = sigmoid_values((hx * p.w_z).rowwise() + p.b_z.row(0));
  const Mat r = sigmoid_values((hx * p.w_r).rowwise() + p.b_r.row(0));
  const Mat rhx = concat(r.cwiseProduct(h_prev), x);
  const Mat h_cand = ((rhx * p.w_h).rowwise() + p.b_h.row(0)).array().tanh().matrix();
  return ((1.0 - z.array()) * h_prev.array() + z.array() * h_cand.array()).matrix();
}

Mat gcgru_step(const GcgruParams& p, const Mat& h_prev, const Mat& x) {
  check_step_shapes(h_prev.rows(), h_prev.cols(), x.rows(), x.cols(), p.theta_z.rows(),
                    p.theta_z.cols(), "gcgru_step");
  if (p.nodes() != h_prev.rows()) {
    throw ShapeError("gcgru_step: filter of " + std::to_string(p.nodes()) +
                     " nodes does not match state rows " + std::to_string(h_prev.rows()));
  }
  const Mat hx = concat(h_prev, x);
  const Mat z = sigmoid_values(ddgf_conv(p.filter_z, hx, p.theta_z).rowwise() + p.b_z.row(0));
  const Mat r = sigmoid_values(ddgf_conv(p.filter_r, hx, p.theta_r).rowwise() + p.b_r.row(0));
  const Mat rhx = concat(r.cwiseProduct(h_prev), x);
  const Mat h_cand =
      (ddgf_conv(p.filter_h, rhx, p.theta_h).rowwise() + p.b_h.row(0)).array().tanh().matrix();
  return ((1.0 - z.array()) * h_prev.array() + z.array() * h_cand.array()).matrix();
}

Mat project(const OutputLayer& out, const Mat& h) {
  if (out.w_f.rows() != h.cols() || out.w_f.cols() != 1) {
    throw ShapeError("project: weights " + shape_str(out.w_f) + " do not map state " +
                     shape_str(h));
  }
  return h * out.w_f;
}

Vard gru_step(const BoundGru& p, Vard h_prev, Vard x) {
  auto hx = concat_cols(h_prev, x);
  auto z = sigmoid(add_bias(matmul(hx, p.w_z), p.b_z));
  auto r = sigmoid(add_bias(matmul(hx, p.w_r), p.b_r));
  auto rhx = concat_cols(hadamard(r, h_prev), x);
  auto h_cand = tanh(add_bias(matmul(rhx, p.w_h), p.b_h));
  return gate_blend(z, h_prev, h_cand);
}

Vard gcgru_step(const BoundGcgru& p, Vard h_prev, Vard x) {
  auto hx = concat_cols(h_prev, x);
  auto z = sigmoid(add_bias(matmul(matmul(p.eff_z, hx), p.theta_z), p.b_z));
  auto r = sigmoid(add_bias(matmul(matmul(p.eff_r, hx), p.theta_r), p.b_r));
  auto rhx = concat_cols(hadamard(r, h_prev), x);
  auto h_cand = tanh(add_bias(matmul(matmul(p.eff_h, rhx), p.theta_h), p.b_h));
  return gate_blend(z, h_prev, h_cand);
}

std::string to_string(ModelKind kind) {
  return kind == ModelKind::kPlainGru ? "seq2seq-rnn" : "gcgrnn";
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "seq2seq-rnn") return ModelKind::kPlainGru;
  if (s == "gcgrnn") return ModelKind::kGraphConvGru;
  throw ValueError("unknown model kind '" + s + "'");
}

SeqModel::SeqModel(SeqModelConfig config, std::uint64_t seed) : config_(config) {
  if (config_.n_sensors < 1 || config_.hidden < 1 || config_.input_steps < 1 ||
      config_.forecast_steps < 1 || config_.depth < 1) {
    throw ContractError("seq_model: dimensions must be positive");
  }
  std::uint64_t state = seed;
  for (int layer = 0; layer < config_.depth; ++layer) {
    const int width = layer == 0 ? 1 : config_.hidden;
    encoder_.push_back(init_cell(width, state));
  }
  if (!config_.share_encoder_decoder) {
    for (int layer = 0; layer < config_.depth; ++layer) {
      const int width = layer == 0 ? 1 : config_.hidden;
      decoder_.push_back(init_cell(width, state));
    }
  }
  Rng rng(state++);
  const double bound = 1.0 / std::sqrt(static_cast<double>(config_.hidden));
  out_.w_f = Mat::NullaryExpr(config_.hidden, 1,
                              [&](Eigen::Index, Eigen::Index) { return rng.uniform(-bound, bound); });
}

SeqModel::CellParams SeqModel::init_cell(int input_width, std::uint64_t& seed_state) const {
  Rng rng(seed_state++);
  const int h = config_.hidden;
  const int rows = h + input_width;
  const double bound = 1.0 / std::sqrt(static_cast<double>(rows));
  auto dense = [&] {
    return Mat::NullaryExpr(rows, h,
                            [&](Eigen::Index, Eigen::Index) { return rng.uniform(-bound, bound); });
  };
  if (config_.kind == ModelKind::kPlainGru) {
    GruParams p;
    p.w_z = dense();
    p.w_r = dense();
    p.w_h = dense();
    p.b_z = p.b_r = p.b_h = Mat::Zero(1, h);
    return p;
  }
  const int n = config_.n_sensors;
  const double fbound = 1.0 / std::sqrt(static_cast<double>(n));
  auto filter = [&] {
    Mat base = Mat::NullaryExpr(
        n, n, [&](Eigen::Index, Eigen::Index) { return rng.uniform(-fbound, fbound); });
    if (config_.ddgf_init == DdgfInit::kIdentityPlusNoise) {
      base = Mat::Identity(n, n) + 0.1 * base;
    }
    return DdgfFilter{std::move(base)};
  };
  GcgruParams p;
  p.filter_z = filter();
  p.filter_r = filter();
  p.filter_h = filter();
  p.theta_z = dense();
  p.theta_r = dense();
  p.theta_h = dense();
  p.b_z = p.b_r = p.b_h = Mat::Zero(1, h);
  return p;
}

namespace {

void collect(std::vector<ParamRef>& out, const std::string& prefix, GruParams& cell) {
  out.push_back({prefix + ".w_z", &cell.w_z});
  out.push_back({prefix + ".w_r", &cell.w_r});
  out.push_back({prefix + ".w_h", &cell.w_h});
  out.push_back({prefix + ".b_z", &cell.b_z});
  out.push_back({prefix + ".b_r", &cell.b_r});
  out.push_back({prefix + ".b_h", &cell.b_h});
}

void collect(std::vector<ParamRef>& out, const std::string& prefix, GcgruParams& cell) {
  out.push_back({prefix + ".ddgf_z", &cell.filter_z.base});
  out.push_back({prefix + ".ddgf_r", &cell.filter_r.base});
  out.push_back({prefix + ".ddgf_h", &cell.filter_h.base});
  out.push_back({prefix + ".theta_z", &cell.theta_z});
  out.push_back({prefix + ".theta_r", &cell.theta_r});
  out.push_back({prefix + ".theta_h", &cell.theta_h});
  out.push_back({prefix + ".b_z", &cell.b_z});
  out.push_back({prefix + ".b_r", &cell.b_r});
  out.push_back({prefix + ".b_h", &cell.b_h});
}

}  // namespace

std::vector<ParamRef> SeqModel::parameters() {
  std::vector<ParamRef> out;
  for (std::size_t layer = 0; layer < encoder_.size(); ++layer) {
    std::visit([&](auto& cell) { collect(out, "encoder.l" + std::to_string(layer), cell); },
               encoder_[layer]);
  }
  for (std::size_t layer = 0; layer < decoder_.size(); ++layer) {
    std::visit([&](auto& cell) { collect(out, "decoder.l" + std::to_string(layer), cell); },
               decoder_[layer]);
  }
  out.push_back({"output.w_f", &out_.w_f});
  return out;
}

SeqModel::Bound SeqModel::bind(Taped& tape) const {
  auto bind_cell = [&tape](const CellParams& cell) -> BoundCell {
    if (const auto* g = std::get_if<GruParams>(&cell)) {
      BoundGru b;
      b.w_z = tape.parameter(g->w_z);
      b.w_r = tape.parameter(g->w_r);
      b.w_h = tape.parameter(g->w_h);
      b.b_z = tape.parameter(g->b_z);
      b.b_r = tape.parameter(g->b_r);
      b.b_h = tape.parameter(g->b_h);
      return b;
    }
    const auto& g = std::get<GcgruParams>(cell);
    BoundGcgru b;
    // Parameter registration order matches collect(): filters, thetas, biases.
    Vard base_z = tape.parameter(g.filter_z.base);
    Vard base_r = tape.parameter(g.filter_r.base);
    Vard base_h = tape.parameter(g.filter_h.base);
    b.theta_z = tape.parameter(g.theta_z);
    b.theta_r = tape.parameter(g.theta_r);
    b.theta_h = tape.parameter(g.theta_h);
    b.b_z = tape.parameter(g.b_z);
    b.b_r = tape.parameter(g.b_r);
    b.b_h = tape.parameter(g.b_h);
    b.eff_z = symmetrize(base_z);
    b.eff_r = symmetrize(base_r);
    b.eff_h = symmetrize(base_h);
    return b;
  };

  Bound bound;
  for (const auto& cell : encoder_) bound.encoder.push_back(bind_cell(cell));
  for (const auto& cell : decoder_) bound.decoder.push_back(bind_cell(cell));
  bound.w_f = tape.parameter(out_.w_f);
  return bound;
}

Vard SeqModel::predict(Taped& tape, const Bound& bound, const Mat& X) const {
  if (X.rows() != config_.n_sensors || X.cols() != config_.input_steps) {
    throw ShapeError("predict: input " + shape_str(X) + ", expected " +
                     shape_str(config_.n_sensors, config_.input_steps));
  }
  const auto& decoder = config_.share_encoder_decoder ? bound.encoder : bound.decoder;
  auto step = [](const BoundCell& cell, Vard h, Vard x) {
    if (const auto* g = std::get_if<BoundGru>(&cell)) return gru_step(*g, h, x);
    return gcgru_step(std::get<BoundGcgru>(cell), h, x);
  };

  std::vector<Vard> h(encoder_.size(),
                      tape.constant(Mat::Zero(config_.n_sensors, config_.hidden)));
  for (int t = 0; t < config_.input_steps; ++t) {
    Vard in = tape.constant(X.col(t));
    for (std::size_t layer = 0; layer < h.size(); ++layer) {
      in = h[layer] = step(bound.encoder[layer], h[layer], in);
    }
  }

  Vard feedback = tape.constant(Mat::Zero(config_.n_sensors, 1));  // GO symbol
  Vard out;
  for (int d = 0; d < config_.forecast_steps; ++d) {
    Vard in = feedback;
    for (std::size_t layer = 0; layer < h.size(); ++layer) {
      in = h[layer] = step(decoder[layer], h[layer], in);
    }
    Vard y = matmul(h.back(), bound.w_f);
    feedback = y;
    out = d == 0 ? y : concat_cols(out, y);
  }
  return out;
}

Mat SeqModel::predict_values(const Mat& X) const {
  if (X.rows() != config_.n_sensors || X.cols() != config_.input_steps) {
    throw ShapeError("predict: input " + shape_str(X) + ", expected " +
                     shape_str(config_.n_sensors, config_.input_steps));
  }
  const auto& decoder = decoder_cells();
  auto step = [](const CellParams& cell, const Mat& h, const Mat& x) {
    if (const auto* g = std::get_if<GruParams>(&cell)) return gru_step(*g, h, x);
    return gcgru_step(std::get<GcgruParams>(cell), h, x);
  };

  std::vector<Mat> h(encoder_.size(), Mat::Zero(config_.n_sensors, config_.hidden));
  for (int t = 0; t < config_.input_steps; ++t) {
    Mat in = X.col(t);
    for (std::size_t layer = 0; layer < h.size(); ++layer) {
      in = h[layer] = step(encoder_[layer], h[layer], in);
    }
  }

  Mat feedback = Mat::Zero(config_.n_sensors, 1);
  Mat out(config_.n_sensors, config_.forecast_steps);
  for (int d = 0; d < config_.forecast_steps; ++d) {
    Mat in = feedback;
    for (std::size_t layer = 0; layer < h.size(); ++layer) {
      in = h[layer] = step(decoder[layer], h[layer], in);
    }
    feedback = project(out_, h.back());
    out.col(d) = feedback.col(0);
  }
  return out;
}

const DdgfFilter& SeqModel::encoder_filter_z() const {
  if (config_.kind != ModelKind::kGraphConvGru) {
    throw ContractError("model has no graph filters");
  }
  return std::get<GcgruParams>(encoder_.front()).filter_z;
}
const DdgfFilter& SeqModel::encoder_filter_r() const {
  if (config_.kind != ModelKind::kGraphConvGru) {
    throw ContractError("model has no graph filters");
  }
  return std::get<GcgruParams>(encoder_.front()).filter_r;
}
const DdgfFilter& SeqModel::encoder_filter_h() const {
  if (config_.kind != ModelKind::kGraphConvGru) {
    throw ContractError("model has no graph filters");
  }
  return std::get<GcgruParams>(encoder_.front()).filter_h;
}

}  // namespace gcgrnn
