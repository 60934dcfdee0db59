#include "gcgrnn/training.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "gcgrnn/errors.hpp"
#include "gcgrnn/rng.hpp"
#include "gcgrnn/tape.hpp"

namespace gcgrnn {

AdamState AdamState::init(const std::vector<ParamRef>& params) {
  AdamState state;
  state.m.reserve(params.size());
  state.v.reserve(params.size());
  for (const auto& p : params) {
    state.m.push_back(Mat::Zero(p.value->rows(), p.value->cols()));
    state.v.push_back(Mat::Zero(p.value->rows(), p.value->cols()));
  }
  return state;
}

void adam_step(const std::vector<ParamRef>& params, const std::vector<Mat>& grads,
               AdamState& state, double lr) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw ContractError("adam_step: parameter, gradient and state counts differ");
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Mat& theta = *params[i].value;
    const Mat& g = grads[i];
    if (g.rows() != theta.rows() || g.cols() != theta.cols()) {
      throw ShapeError("adam_step: gradient " + shape_str(g) + " does not match parameter " +
                       params[i].name + " " + shape_str(theta));
    }
    Mat& m = state.m[i];
    Mat& v = state.v[i];
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
    theta.array() -=
        lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + state.epsilon);
  }
}

double clip_global_norm(std::vector<Mat>& grads, double max_norm) {
  double sq = 0.0;
  for (const auto& g : grads) sq += g.squaredNorm();
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double factor = max_norm / norm;
    for (auto& g : grads) g *= factor;
  }
  return norm;
}

double lr_schedule(int epoch, const TrainConfig& cfg) {
  if (epoch < 0) {
    throw ContractError("lr_schedule: epoch must be nonnegative");
  }
  return epoch < cfg.decay_after_epochs ? cfg.initial_lr : cfg.decayed_lr;
}

double evaluate_mae(const SeqModel& model, const std::vector<Sample>& samples,
                    const Normalizer& norm) {
  double abs_sum = 0.0;
  double count = 0.0;
  for (const auto& sample : samples) {
    const Mat pred = norm.invert(model.predict_values(norm.apply(sample.X)));
    const auto mask = (sample.Y.array() != 0.0).cast<double>();
    abs_sum += (mask * (pred - sample.Y).array().abs()).sum();
    count += mask.sum();
  }
  if (count == 0.0) {
    throw ValueError("evaluate_mae: every target entry is zero");
  }
  return abs_sum / count;
}

TrainResult train(SeqModel& model, const SplitSet& split, const TrainConfig& cfg) {
  if (split.train.empty() || split.validation.empty() || split.test.empty()) {
    throw ContractError("train: every split part must be nonempty");
  }
  if (cfg.batch_size < 1 || cfg.max_epochs < 1 || cfg.patience < 1) {
    throw ContractError("train: batch size, epochs and patience must be positive");
  }

  const Normalizer norm = fit_normalizer(split.train);
  auto params = model.parameters();
  AdamState adam = AdamState::init(params);
  Rng shuffle_rng(cfg.seed);

  std::vector<std::size_t> order(split.train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<Mat> best_params;
  for (const auto& p : params) best_params.push_back(*p.value);

  PatienceTracker tracker(cfg.patience);
  TrainHistory history;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const auto epoch_start = std::chrono::steady_clock::now();
    const double lr = lr_schedule(epoch, cfg);
    shuffle_rng.shuffle(order);

    double train_abs = 0.0;
    double train_count = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      Taped tape;
      const SeqModel::Bound bound = model.bind(tape);
      Vard batch_loss;
      int contributing = 0;
      for (std::size_t k = begin; k < end; ++k) {
        const Sample& sample = split.train[order[k]];
        const Mat mask = (sample.Y.array() != 0.0).cast<double>().matrix();
        // A sample whose targets are all zero is fully excluded by the
        // zero-truth rule and contributes nothing.
        if (mask.sum() == 0.0) continue;
        Vard pred = affine(model.predict(tape, bound, norm.apply(sample.X)), norm.std, norm.mean);
        Vard loss = mae_loss(pred, sample.Y, mask);
        batch_loss = contributing == 0 ? loss : add(batch_loss, loss);
        ++contributing;
      }
      if (contributing == 0) continue;
      batch_loss = scale(batch_loss, 1.0 / contributing);
      const double loss_value = tape.value(batch_loss)(0, 0);
      if (!std::isfinite(loss_value)) {
        throw DivergenceError("train: non-finite loss at epoch " + std::to_string(epoch) +
                              ", batch " + std::to_string(begin / cfg.batch_size));
      }
      train_abs += loss_value * contributing;
      train_count += contributing;

      tape.backward(batch_loss);
      std::vector<Mat> grads = tape.parameter_gradients();
      clip_global_norm(grads, cfg.clip_norm);
      adam_step(params, grads, adam, lr);
    }
    if (train_count == 0.0) {
      throw ValueError("train: every training target is zero");
    }

    const double val_mae = evaluate_mae(model, split.validation, norm);
    if (!std::isfinite(val_mae)) {
      throw DivergenceError("train: non-finite validation MAE at epoch " + std::to_string(epoch));
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_start).count();
    history.epochs.push_back({epoch, train_abs / train_count, val_mae, lr, seconds});

    if (tracker.observe(val_mae)) {
      for (std::size_t i = 0; i < params.size(); ++i) best_params[i] = *params[i].value;
    }
    if (tracker.should_stop()) break;
  }

  for (std::size_t i = 0; i < params.size(); ++i) *params[i].value = best_params[i];
  history.best_epoch = tracker.best_epoch();
  history.best_val_mae = tracker.best_value();
  return TrainResult{std::move(history), norm};
}

void write_history_csv(const TrainHistory& history, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("write_history_csv: cannot open " + path);
  }
  out << "epoch,train_mae,val_mae,lr,seconds\n";
  char buf[32];
  for (const auto& rec : history.epochs) {
    out << rec.epoch << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", rec.train_mae);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", rec.val_mae);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", rec.lr);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.3f", rec.seconds);
    out << buf << '\n';
  }
}

}  // namespace gcgrnn
