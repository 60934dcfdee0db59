#include <doctest.h>

#include <cmath>

#include "gcgrnn/errors.hpp"
#include "gcgrnn/rng.hpp"
#include "gcgrnn/tape.hpp"
#include "gradcheck.hpp"

using namespace gcgrnn;

namespace {

Mat random_mat(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  return Mat::NullaryExpr(rows, cols,
                          [&](Eigen::Index, Eigen::Index) { return rng.uniform(-1.0, 1.0); });
}

Mat m22(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("matmul values") {
  Taped tape;
  auto a = tape.constant(m22(1, 2, 3, 4));
  auto eye = tape.constant(Mat::Identity(2, 2));
  CHECK(tape.value(matmul(eye, a)).isApprox(m22(1, 2, 3, 4)));

  Mat rhs(2, 1);
  rhs << 5, 6;
  auto b = tape.constant(rhs);
  Mat expected(2, 1);
  expected << 17, 39;
  CHECK(tape.value(matmul(a, b)).isApprox(expected));
}

TEST_CASE("matmul rejects mismatched inner dimensions") {
  Taped tape;
  auto a = tape.constant(Mat::Zero(2, 3));
  auto b = tape.constant(Mat::Zero(2, 2));
  CHECK_THROWS_AS(matmul(a, b), ShapeError);
}

TEST_CASE("matmul gradient matches the hand result") {
  // loss = sum(A * B) with A = [[1, 1]], B = [[2], [3]]: dA = [[2, 3]].
  Taped tape;
  Mat a_val(1, 2);
  a_val << 1, 1;
  Mat b_val(2, 1);
  b_val << 2, 3;
  auto a = tape.parameter(a_val);
  auto b = tape.constant(b_val);
  auto loss = sum(matmul(a, b));
  tape.backward(loss);
  Mat expected(1, 2);
  expected << 2, 3;
  CHECK(tape.grad(a).isApprox(expected));
}

TEST_CASE("concat_cols stacks columns and rejects mismatches") {
  Taped tape;
  Mat a_val(2, 1), b_val(2, 1);
  a_val << 1, 2;
  b_val << 3, 4;
  auto joined = concat_cols(tape.constant(a_val), tape.constant(b_val));
  CHECK(tape.value(joined).isApprox(m22(1, 3, 2, 4)));

  CHECK_THROWS_AS(concat_cols(tape.constant(Mat::Zero(2, 1)), tape.constant(Mat::Zero(3, 1))),
                  ShapeError);
  CHECK_THROWS_AS(concat_cols(tape.constant(Mat::Zero(2, 0)), tape.constant(Mat::Zero(2, 1))),
                  ShapeError);

  // (N x H) joined with (N x 1) is N x (H+1).
  auto wide = concat_cols(tape.constant(Mat::Zero(5, 7)), tape.constant(Mat::Zero(5, 1)));
  CHECK(tape.value(wide).rows() == 5);
  CHECK(tape.value(wide).cols() == 8);
}

TEST_CASE("hadamard values") {
  Taped tape;
  Mat a(1, 2), b(1, 2);
  a << 2, 3;
  b << 4, 5;
  Mat expected(1, 2);
  expected << 8, 15;
  CHECK(tape.value(hadamard(tape.constant(a), tape.constant(b))).isApprox(expected));

  auto v = tape.constant(a);
  CHECK(tape.value(hadamard(v, tape.constant(Mat::Ones(1, 2)))).isApprox(a));
  CHECK(tape.value(hadamard(v, tape.constant(Mat::Zero(1, 2)))).isZero(0.0));
  CHECK_THROWS_AS(hadamard(v, tape.constant(Mat::Zero(2, 2))), ShapeError);
}

TEST_CASE("activations at zero") {
  Taped tape;
  auto zero = tape.constant(Mat::Zero(1, 1));
  CHECK(tape.value(sigmoid(zero))(0, 0) == doctest::Approx(0.5));
  CHECK(tape.value(tanh(zero))(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("activation outputs stay inside their open ranges") {
  // Up to +-8, well before double-precision saturation rounds to the bound.
  Rng rng(67);
  Taped tape;
  auto x = tape.constant(random_mat(rng, 6, 6) * 8.0);
  const Mat s = tape.value(sigmoid(x));
  const Mat t = tape.value(tanh(x));
  CHECK((s.array() > 0.0).all());
  CHECK((s.array() < 1.0).all());
  CHECK((t.array() > -1.0).all());
  CHECK((t.array() < 1.0).all());
}

TEST_CASE("sigmoid gradient at zero is a quarter") {
  Taped tape;
  Mat x0 = Mat::Zero(1, 1);
  auto x = tape.parameter(x0);
  tape.backward(sum(sigmoid(x)));
  CHECK(tape.grad(x)(0, 0) == doctest::Approx(0.25).epsilon(1e-12));

  auto numeric = testing::finite_difference_gradient(
      [&] {
        Taped t;
        return t.value(sum(sigmoid(t.constant(x0))))(0, 0);
      },
      x0, 1e-6);
  CHECK(std::abs(numeric(0, 0) - 0.25) <= 1e-6 * 0.25);
}

TEST_CASE("gate_blend endpoints and midpoint") {
  Taped tape;
  Mat a_val(1, 1), b_val(1, 1);
  a_val << 2;
  b_val << 4;
  auto a = tape.constant(a_val);
  auto b = tape.constant(b_val);
  CHECK(tape.value(gate_blend(tape.constant(Mat::Zero(1, 1)), a, b))(0, 0) == 2.0);
  CHECK(tape.value(gate_blend(tape.constant(Mat::Ones(1, 1)), a, b))(0, 0) == 4.0);
  CHECK(tape.value(gate_blend(tape.constant(Mat::Constant(1, 1, 0.5)), a, b))(0, 0) == 3.0);
  CHECK_THROWS_AS(gate_blend(tape.constant(Mat::Zero(2, 1)), a, b), ShapeError);
}

TEST_CASE("add_bias broadcasts and reduces") {
  Taped tape;
  Mat bias(1, 2);
  bias << 1, 2;
  auto out = add_bias(tape.constant(Mat::Zero(2, 2)), tape.constant(bias));
  CHECK(tape.value(out).isApprox(m22(1, 2, 1, 2)));

  CHECK(tape.value(add_bias(tape.constant(m22(1, 2, 3, 4)), tape.constant(Mat::Zero(1, 2))))
            .isApprox(m22(1, 2, 3, 4)));

  // Bias gradient of sum(A + b) over a 3x2 A sums over rows.
  Taped t2;
  auto b = t2.parameter(Mat::Zero(1, 2));
  t2.backward(sum(add_bias(t2.constant(Mat::Zero(3, 2)), b)));
  CHECK(t2.grad(b).isApprox(Mat::Constant(1, 2, 3.0)));

  CHECK_THROWS_AS(add_bias(tape.constant(Mat::Zero(2, 2)), tape.constant(Mat::Zero(1, 3))),
                  ShapeError);
}

TEST_CASE("mae_loss worked examples") {
  Taped tape;
  Mat pred(1, 1), target(1, 1), mask(1, 1);
  pred << 3;
  target << 1;
  mask << 1;
  CHECK(tape.value(mae_loss(tape.constant(pred), target, mask))(0, 0) == doctest::Approx(2.0));

  Mat pred2(1, 2), target2(1, 2), mask2(1, 2);
  pred2 << 3, 10;
  target2 << 1, 0;
  mask2 << 1, 0;
  CHECK(tape.value(mae_loss(tape.constant(pred2), target2, mask2))(0, 0) ==
        doctest::Approx(2.0));

  CHECK(tape.value(mae_loss(tape.constant(target2), target2, mask2))(0, 0) ==
        doctest::Approx(0.0));

  CHECK_THROWS_AS(mae_loss(tape.constant(pred2), target2, Mat::Zero(1, 2).eval()), ValueError);
  Mat bad_mask(1, 2);
  bad_mask << 0.5, 1;
  CHECK_THROWS_AS(mae_loss(tape.constant(pred2), target2, bad_mask), ValueError);
}

TEST_CASE("backward on sum gives ones and ignores unused parameters") {
  Taped tape;
  auto w = tape.parameter(m22(1, 2, 3, 4));
  auto unused = tape.parameter(Mat::Ones(3, 3));
  tape.backward(sum(w));
  auto grads = tape.parameter_gradients();
  REQUIRE(grads.size() == 2);
  CHECK(grads[0].isApprox(Mat::Ones(2, 2)));
  CHECK(grads[1].isZero(0.0));
  CHECK(tape.grad(unused).isZero(0.0));
}

TEST_CASE("backward requires a scalar loss") {
  Taped tape;
  auto w = tape.parameter(Mat::Ones(2, 2));
  CHECK_THROWS_AS(tape.backward(w), ContractError);
}

TEST_CASE("gradients are unavailable before backward runs") {
  Taped tape;
  auto w = tape.parameter(Mat::Ones(2, 2));
  CHECK_THROWS_AS(tape.grad(w), ContractError);
  CHECK_THROWS_AS(tape.parameter_gradients(), ContractError);

  Taped other;
  auto foreign = other.constant(Mat::Ones(1, 1));
  CHECK_THROWS_AS(hadamard(w, foreign), ContractError);
}

TEST_CASE("every op matches central finite differences") {
  Rng rng(42);
  Mat a0 = random_mat(rng, 3, 4);
  Mat b0 = random_mat(rng, 4, 2);
  Mat c0 = random_mat(rng, 3, 4);
  Mat bias0 = random_mat(rng, 1, 4);
  Mat gate0 = Mat::NullaryExpr(3, 4, [&](Eigen::Index, Eigen::Index) {
    return rng.uniform(0.1, 0.9);
  });
  Mat target = random_mat(rng, 3, 2);
  Mat mask = Mat::Ones(3, 2);
  mask(1, 1) = 0.0;

  // One composite graph touching every differentiable op.
  auto build = [&](Taped& tape, Vard a, Vard b, Vard c, Vard bias, Vard gate) {
    auto mixed = add_bias(hadamard(tanh(a), sigmoid(c)), bias);     // 3x4
    auto blended = gate_blend(gate, mixed, add(a, scale(c, 1.3)));  // 3x4
    auto joined = concat_cols(blended, affine(a, 0.5, -0.2));       // 3x8
    auto sym = symmetrize(matmul(joined, tape.constant(Mat::Ones(8, 3))));
    auto projected = matmul(sym, matmul(blended, b));               // 3x2
    return mae_loss(projected, target, mask);
  };

  std::vector<Mat*> params{&a0, &b0, &c0, &bias0, &gate0};
  auto loss_value = [&] {
    Taped tape;
    return tape.value(build(tape, tape.constant(a0), tape.constant(b0), tape.constant(c0),
                            tape.constant(bias0), tape.constant(gate0)))(0, 0);
  };

  Taped tape;
  auto a = tape.parameter(a0);
  auto b = tape.parameter(b0);
  auto c = tape.parameter(c0);
  auto bias = tape.parameter(bias0);
  auto gate = tape.parameter(gate0);
  tape.backward(build(tape, a, b, c, bias, gate));
  const auto analytic = tape.parameter_gradients();

  const double worst = testing::max_gradient_error(loss_value, params, analytic);
  CHECK(worst <= 1e-4);
}

TEST_CASE("identical inputs give bit-identical forwards and gradients") {
  auto run = [] {
    Rng rng(7);
    Mat a0 = random_mat(rng, 4, 4);
    Mat b0 = random_mat(rng, 4, 4);
    Taped tape;
    auto a = tape.parameter(a0);
    auto b = tape.constant(b0);
    auto loss = sum(hadamard(sigmoid(matmul(a, b)), tanh(add(a, b))));
    tape.backward(loss);
    return std::pair<double, Mat>(tape.value(loss)(0, 0), tape.grad(a));
  };
  auto [v1, g1] = run();
  auto [v2, g2] = run();
  CHECK(v1 == v2);
  CHECK((g1 - g2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("shape checks reject random mismatched pairs") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r1 = static_cast<Eigen::Index>(1 + rng.next() % 5);
    const auto c1 = static_cast<Eigen::Index>(1 + rng.next() % 5);
    const auto r2 = static_cast<Eigen::Index>(1 + rng.next() % 5);
    const auto c2 = static_cast<Eigen::Index>(1 + rng.next() % 5);
    Taped tape;
    auto a = tape.constant(Mat::Zero(r1, c1));
    auto b = tape.constant(Mat::Zero(r2, c2));
    if (c1 != r2) CHECK_THROWS_AS(matmul(a, b), ShapeError);
    if (r1 != r2) CHECK_THROWS_AS(concat_cols(a, b), ShapeError);
    if (r1 != r2 || c1 != c2) CHECK_THROWS_AS(hadamard(a, b), ShapeError);
  }
}

TEST_CASE("shared subexpressions accumulate gradients correctly") {
  // Graphs that reuse one node several times, including both operands of a
  // binary op, checked against finite differences.
  Rng rng(73);
  Mat a0 = random_mat(rng, 3, 3);
  Mat target = random_mat(rng, 3, 3);
  target.array() += 1.5;
  const Mat mask = Mat::Ones(3, 3);

  auto build = [&](Taped& tape, Vard a) {
    auto self_product = hadamard(a, a);
    auto self_matmul = matmul(a, a);
    auto blend = gate_blend(sigmoid(a), self_product, self_matmul);
    auto joined = concat_cols(blend, a);                      // a used again
    auto collapsed = matmul(joined, tape.constant(Mat::Ones(6, 3)));
    return mae_loss(add(collapsed, a), target, mask);
  };

  Taped tape;
  auto a = tape.parameter(a0);
  tape.backward(build(tape, a));
  const auto analytic = tape.parameter_gradients();

  auto loss_value = [&] {
    Taped t;
    return t.value(build(t, t.constant(a0)))(0, 0);
  };
  CHECK(testing::max_gradient_error(loss_value, {&a0}, analytic) <= 1e-4);
}

TEST_CASE("backward is linear in the loss") {
  Rng rng(3);
  Mat a0 = random_mat(rng, 3, 3);
  const double alpha = 2.75;

  auto gradient = [&](double factor) {
    Taped tape;
    auto a = tape.parameter(a0);
    auto loss = scale(sum(hadamard(tanh(a), a)), factor);
    tape.backward(loss);
    return tape.grad(a).eval();
  };
  const Mat base = gradient(1.0);
  const Mat scaled = gradient(alpha);
  CHECK((scaled - alpha * base).cwiseAbs().maxCoeff() <= 1e-12);
}
