#pragma once

// Training protocol: Adam with bias correction, a two-level learning-rate
// step schedule, seeded mini-batch shuffling, global-norm gradient clipping,
// and early stopping on validation MAE with best-checkpoint retention. Both
// the loss and the validation signal are masked MAE on the denormalized
// (vehicle-count) scale.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gcgrnn/data.hpp"
#include "gcgrnn/model.hpp"
#include "gcgrnn/types.hpp"

namespace gcgrnn {

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step = 0;
  std::vector<Mat> m, v;  // first and second moments, one per parameter

  /// Moments start at zero with the parameters' shapes.
  static AdamState init(const std::vector<ParamRef>& params);
};

/// In-place update: m and v decay toward the gradient statistics, the
/// bias-corrected ratio scales the step.
void adam_step(const std::vector<ParamRef>& params, const std::vector<Mat>& grads,
               AdamState& state, double lr);

/// Scales all gradients by max_norm / norm when the global L2 norm exceeds
/// max_norm; returns the pre-clip norm.
double clip_global_norm(std::vector<Mat>& grads, double max_norm);

struct TrainConfig {
  double initial_lr = 0.01;
  double decayed_lr = 0.001;
  int decay_after_epochs = 20;
  int max_epochs = 300;
  int batch_size = 32;
  int patience = 50;
  std::uint64_t seed = 0;
  double clip_norm = 5.0;
};

/// initial_lr for epochs before decay_after_epochs, decayed_lr afterwards.
double lr_schedule(int epoch, const TrainConfig& cfg);

/// Early-stopping state: stop after `patience` consecutive epochs without a
/// strictly lower validation MAE.
class PatienceTracker {
 public:
  explicit PatienceTracker(int patience) : patience_(patience) {}

  /// Returns true when this epoch improved on the best value so far.
  bool observe(double val_mae) {
    ++last_epoch_;
    if (val_mae < best_value_) {
      best_value_ = val_mae;
      best_epoch_ = last_epoch_;
      since_improvement_ = 0;
      return true;
    }
    ++since_improvement_;
    return false;
  }

  bool should_stop() const { return since_improvement_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_value() const { return best_value_; }
  int last_epoch() const { return last_epoch_; }

 private:
  int patience_;
  int last_epoch_ = -1;
  int best_epoch_ = -1;
  int since_improvement_ = 0;
  double best_value_ = std::numeric_limits<double>::infinity();
};

struct EpochRecord {
  int epoch = 0;
  double train_mae = 0.0;
  double val_mae = 0.0;
  double lr = 0.0;
  double seconds = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = -1;
  double best_val_mae = 0.0;
};

/// Pooled masked MAE of denormalized predictions over a sample set; entries
/// with zero ground truth are excluded.
double evaluate_mae(const SeqModel& model, const std::vector<Sample>& samples,
                    const Normalizer& norm);

struct TrainResult {
  TrainHistory history;
  Normalizer normalizer;  // fit on split.train; needed to use the model
};

/// Runs the full protocol and leaves the model at its best-validation
/// parameters. Samples whose targets are entirely zero are excluded from the
/// loss, mirroring the zero-truth rule of the evaluation metrics.
TrainResult train(SeqModel& model, const SplitSet& split, const TrainConfig& cfg);

/// epoch,train_mae,val_mae,lr,seconds
void write_history_csv(const TrainHistory& history, const std::string& path);

}  // namespace gcgrnn
