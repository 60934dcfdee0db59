#pragma once

#include <Eigen/Dense>

#include <string>

namespace gcgrnn {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Mat = DenseMatrix<double>;

/// Named reference to a trainable parameter matrix owned by a model.
struct ParamRef {
  std::string name;
  Mat* value;
};

inline std::string shape_str(Eigen::Index rows, Eigen::Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

inline std::string shape_str(const Mat& m) { return shape_str(m.rows(), m.cols()); }

}  // namespace gcgrnn
