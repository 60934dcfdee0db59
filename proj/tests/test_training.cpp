#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gcgrnn/data.hpp"
#include "gcgrnn/errors.hpp"
#include "gcgrnn/rng.hpp"
#include "gcgrnn/training.hpp"

using namespace gcgrnn;

namespace {

SplitSet sinusoid_split(int sensors, int steps, double noise, std::uint64_t seed, int t = 4,
                        int f = 2) {
  const Adjacency coupling(Mat::Identity(sensors, sensors));
  const TrafficSeries series =
      synth_generate(sensors, steps, 24.0, coupling, noise, seed);
  return split_chronological(make_windows(series, t, f));
}

SeqModelConfig tiny_model(int sensors, int t = 4, int f = 2) {
  SeqModelConfig cfg;
  cfg.kind = ModelKind::kGraphConvGru;
  cfg.n_sensors = sensors;
  cfg.hidden = 4;
  cfg.input_steps = t;
  cfg.forecast_steps = f;
  return cfg;
}

}  // namespace

TEST_CASE("first adam step is roughly the learning rate") {
  Mat theta = Mat::Zero(1, 1);
  std::vector<ParamRef> params{{"theta", &theta}};
  AdamState state = AdamState::init(params);
  adam_step(params, {Mat::Ones(1, 1)}, state, 0.01);
  // Bias correction makes the ratio 1 at t = 1, up to epsilon.
  CHECK(theta(0, 0) == doctest::Approx(-0.01).epsilon(1e-6));
  CHECK(state.step == 1);
}

TEST_CASE("zero gradient leaves parameters unchanged while moments decay") {
  Mat theta = Mat::Constant(2, 2, 3.0);
  std::vector<ParamRef> params{{"theta", &theta}};
  AdamState state = AdamState::init(params);
  adam_step(params, {Mat::Ones(2, 2)}, state, 0.1);
  const Mat after_first = theta;
  const Mat m_first = state.m[0];
  adam_step(params, {Mat::Zero(2, 2)}, state, 0.0);
  CHECK(theta == after_first);
  CHECK(state.m[0](0, 0) == doctest::Approx(0.9 * m_first(0, 0)));
}

TEST_CASE("adam updates parameters independently") {
  Mat a = Mat::Zero(1, 1);
  Mat b = Mat::Zero(1, 1);
  std::vector<ParamRef> params{{"a", &a}, {"b", &b}};
  AdamState state = AdamState::init(params);
  adam_step(params, {Mat::Ones(1, 1), Mat::Zero(1, 1)}, state, 0.01);
  CHECK(a(0, 0) != 0.0);
  CHECK(b(0, 0) == 0.0);

  CHECK_THROWS_AS(adam_step(params, {Mat::Ones(1, 1)}, state, 0.01), ContractError);
  CHECK_THROWS_AS(adam_step(params, {Mat::Ones(1, 1), Mat::Ones(2, 2)}, state, 0.01),
                  ShapeError);
}

TEST_CASE("adam step magnitude is bounded by the learning rate") {
  Rng rng(121);
  Mat theta = Mat::Zero(3, 3);
  std::vector<ParamRef> params{{"theta", &theta}};
  AdamState state = AdamState::init(params);
  for (int step = 0; step < 20; ++step) {
    const Mat before = theta;
    const double lr = 1e-4;
    adam_step(params,
              {Mat::NullaryExpr(3, 3,
                                [&](Eigen::Index, Eigen::Index) {
                                  return rng.uniform(-5.0, 5.0);
                                })},
              state, lr);
    CHECK((theta - before).cwiseAbs().maxCoeff() <= lr * (1.0 + 1e-6));
  }
}

TEST_CASE("global norm clipping rescales only oversized gradients") {
  std::vector<Mat> grads{Mat::Constant(2, 2, 3.0), Mat::Constant(1, 2, 4.0)};
  const double norm = std::sqrt(4 * 9.0 + 2 * 16.0);
  CHECK(clip_global_norm(grads, 100.0) == doctest::Approx(norm));
  CHECK(grads[0](0, 0) == doctest::Approx(3.0));

  const double clipped_norm = clip_global_norm(grads, 1.0);
  CHECK(clipped_norm == doctest::Approx(norm));
  double sq = 0.0;
  for (const auto& g : grads) sq += g.squaredNorm();
  CHECK(std::sqrt(sq) == doctest::Approx(1.0));
}

TEST_CASE("learning rate schedule steps down once") {
  TrainConfig cfg;
  CHECK(lr_schedule(0, cfg) == doctest::Approx(0.01));
  CHECK(lr_schedule(19, cfg) == doctest::Approx(0.01));
  CHECK(lr_schedule(20, cfg) == doctest::Approx(0.001));
  CHECK(lr_schedule(299, cfg) == doctest::Approx(0.001));
  CHECK_THROWS_AS(lr_schedule(-1, cfg), ContractError);
}

TEST_CASE("patience tracker arithmetic") {
  // Improvements through epoch 5, constant afterwards: stop at epoch 55.
  PatienceTracker tracker(50);
  int epoch = 0;
  for (; epoch < 200; ++epoch) {
    const double val = epoch <= 5 ? 10.0 - epoch : 5.0;
    tracker.observe(val);
    if (tracker.should_stop()) break;
  }
  CHECK(epoch == 55);
  CHECK(tracker.best_epoch() == 5);
  CHECK(tracker.best_value() == doctest::Approx(5.0));

  // Strictly decreasing validation never stops.
  PatienceTracker eager(3);
  for (int e = 0; e < 100; ++e) {
    eager.observe(100.0 - e);
    CHECK(!eager.should_stop());
  }
  CHECK(eager.best_epoch() == 99);
}

TEST_CASE("training stops best_epoch plus patience epochs after the minimum") {
  SplitSet split = sinusoid_split(2, 160, 0.0, 3);
  SeqModel model(tiny_model(2), 5);
  TrainConfig cfg;
  cfg.max_epochs = 40;
  cfg.patience = 4;
  cfg.batch_size = 16;
  cfg.seed = 5;
  // Freeze learning after two epochs so validation goes exactly constant.
  cfg.decay_after_epochs = 2;
  cfg.decayed_lr = 0.0;
  const TrainResult result = train(model, split, cfg);
  const auto& hist = result.history;
  REQUIRE(!hist.epochs.empty());
  CHECK(hist.best_epoch <= 1);
  CHECK(hist.epochs.back().epoch == hist.best_epoch + cfg.patience);

  double min_val = hist.epochs.front().val_mae;
  for (const auto& rec : hist.epochs) min_val = std::min(min_val, rec.val_mae);
  CHECK(hist.best_val_mae == doctest::Approx(min_val));
}

TEST_CASE("returned model carries the best-epoch parameters") {
  SplitSet split = sinusoid_split(2, 200, 1.0, 11);
  SeqModel model(tiny_model(2), 17);
  TrainConfig cfg;
  cfg.max_epochs = 6;
  cfg.patience = 50;
  cfg.batch_size = 16;
  cfg.seed = 17;
  const TrainResult result = train(model, split, cfg);
  // Patience is never exhausted, so the loop runs out its epoch budget.
  CHECK(result.history.epochs.size() == 6);
  // Recomputing the validation MAE on the restored parameters reproduces
  // the recorded best.
  const double val = evaluate_mae(model, split.validation, result.normalizer);
  CHECK(val == doctest::Approx(result.history.best_val_mae).epsilon(1e-12));
}

TEST_CASE("identical seeds give identical histories") {
  auto run = [] {
    SplitSet split = sinusoid_split(2, 150, 0.5, 23);
    SeqModel model(tiny_model(2), 29);
    TrainConfig cfg;
    cfg.max_epochs = 4;
    cfg.patience = 10;
    cfg.batch_size = 8;
    cfg.seed = 29;
    return train(model, split, cfg);
  };
  const TrainResult a = run();
  const TrainResult b = run();
  REQUIRE(a.history.epochs.size() == b.history.epochs.size());
  for (std::size_t i = 0; i < a.history.epochs.size(); ++i) {
    CHECK(a.history.epochs[i].train_mae == b.history.epochs[i].train_mae);
    CHECK(a.history.epochs[i].val_mae == b.history.epochs[i].val_mae);
  }
}

TEST_CASE("training rejects empty split parts") {
  SplitSet split = sinusoid_split(2, 120, 0.0, 31);
  SeqModel model(tiny_model(2), 31);
  TrainConfig cfg;
  split.validation.clear();
  CHECK_THROWS_AS(train(model, split, cfg), ContractError);
}

TEST_CASE("samples with all-zero targets are excluded from the loss") {
  SplitSet split = sinusoid_split(2, 120, 0.0, 41);
  split.train[2].Y.setZero();  // a fully excluded sample, as after an outage
  SeqModel model(tiny_model(2), 41);
  TrainConfig cfg;
  cfg.max_epochs = 2;
  cfg.batch_size = 16;
  cfg.seed = 41;
  const TrainResult result = train(model, split, cfg);
  CHECK(result.history.epochs.size() == 2);
  CHECK(std::isfinite(result.history.epochs.back().train_mae));
}

TEST_CASE("a non-finite loss raises a divergence error naming the epoch") {
  SplitSet split = sinusoid_split(2, 120, 0.0, 37);
  split.train[3].X(0, 0) = std::nan("");
  SeqModel model(tiny_model(2), 37);
  TrainConfig cfg;
  cfg.max_epochs = 2;
  cfg.batch_size = 64;  // the poisoned sample lands in the first batch
  CHECK_THROWS_WITH_AS(train(model, split, cfg), doctest::Contains("epoch 0"),
                       DivergenceError);
}

TEST_CASE("history csv carries the fixed header and one row per epoch") {
  TrainHistory history;
  history.epochs.push_back({0, 2.5, 3.5, 0.01, 0.125});
  history.epochs.push_back({1, 2.0, 3.0, 0.01, 0.124});
  history.best_epoch = 1;
  write_history_csv(history, "history_test.csv");
  std::ifstream in("history_test.csv");
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "epoch,train_mae,val_mae,lr,seconds");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2);
  in.close();
  std::remove("history_test.csv");
}
