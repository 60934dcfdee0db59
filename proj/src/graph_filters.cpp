#include "gcgrnn/graph_filters.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gcgrnn/errors.hpp"

namespace gcgrnn {

Adjacency::Adjacency(Mat weights) : weights_(std::move(weights)) {
  if (weights_.rows() != weights_.cols()) {
    throw ShapeError("adjacency: matrix must be square, got " + shape_str(weights_));
  }
  if ((weights_.array() < 0.0).any()) {
    throw ValueError("adjacency: negative weight");
  }
  if (!weights_.isApprox(weights_.transpose(), 0.0)) {
    throw ValueError("adjacency: weights must be symmetric");
  }
}

Adjacency gaussian_adjacency(const Mat& dist, double threshold) {
  const Eigen::Index n = dist.rows();
  if (n != dist.cols()) {
    throw ShapeError("gaussian_adjacency: distance matrix must be square, got " +
                     shape_str(dist));
  }
  if ((dist.array() < 0.0).any()) {
    throw ValueError("gaussian_adjacency: negative distance");
  }
  if (dist.diagonal().any()) {
    throw ValueError("gaussian_adjacency: nonzero diagonal distance");
  }
  if (!dist.isApprox(dist.transpose(), 0.0)) {
    throw ValueError("gaussian_adjacency: distance matrix must be symmetric");
  }
  if (threshold < 0.0 || threshold >= 1.0) {
    throw ValueError("gaussian_adjacency: threshold must lie in [0,1)");
  }

  // Population statistics over the off-diagonal entries.
  const double count = static_cast<double>(n) * static_cast<double>(n - 1);
  if (count == 0.0) {
    throw ValueError("gaussian_adjacency: need at least two nodes");
  }
  const double mean = (dist.sum() - dist.diagonal().sum()) / count;
  double var = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = dist(i, j) - mean;
      var += d * d;
    }
  }
  const double sigma = std::sqrt(var / count);
  if (sigma == 0.0) {
    throw ValueError("gaussian_adjacency: all pairwise distances equal (sigma = 0)");
  }

  Mat a = (-dist.array() / (sigma * sigma)).exp().matrix();
  a = (a.array() > threshold).select(a, Mat::Zero(n, n));
  return Adjacency(std::move(a));
}

Mat normalized_laplacian(const Adjacency& a) {
  const Mat& w = a.weights();
  const Eigen::VectorXd degree = w.rowwise().sum();
  for (Eigen::Index i = 0; i < degree.size(); ++i) {
    if (degree(i) <= 0.0) {
      throw ValueError("normalized_laplacian: node " + std::to_string(i) +
                       " has zero degree");
    }
  }
  const Eigen::VectorXd inv_sqrt = degree.array().rsqrt();
  return Mat::Identity(w.rows(), w.cols()) -
         inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal();
}

Mat simplified_conv(const Adjacency& a, const Mat& x, const Mat& theta) {
  const Mat& w = a.weights();
  if (x.rows() != w.rows()) {
    throw ShapeError("simplified_conv: signal " + shape_str(x) +
                     " does not match adjacency " + shape_str(w));
  }
  if (theta.rows() != x.cols()) {
    throw ShapeError("simplified_conv: filter " + shape_str(theta) +
                     " does not match signal " + shape_str(x));
  }
  const Mat self_looped = w + Mat::Identity(w.rows(), w.cols());
  const Eigen::VectorXd inv_sqrt = self_looped.rowwise().sum().array().rsqrt();
  return inv_sqrt.asDiagonal() * self_looped * inv_sqrt.asDiagonal() * x * theta;
}

Mat ddgf_conv(const DdgfFilter& f, const Mat& x, const Mat& theta) {
  if (x.rows() != f.base.rows()) {
    throw ShapeError("ddgf_conv: signal " + shape_str(x) + " does not match filter " +
                     shape_str(f.base));
  }
  if (theta.rows() != x.cols()) {
    throw ShapeError("ddgf_conv: filter weights " + shape_str(theta) +
                     " do not match signal " + shape_str(x));
  }
  return f.effective() * x * theta;
}

void export_filter(const Mat& effective, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("export_filter: cannot open " + path);
  }
  char buf[32];
  for (Eigen::Index i = 0; i < effective.rows(); ++i) {
    for (Eigen::Index j = 0; j < effective.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", effective(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
}

}  // namespace gcgrnn
