#pragma once

// Graph filters: Gaussian-kernel adjacency construction, the normalized
// Laplacian, the renormalized one-hop graph convolution, and the trainable
// data-driven graph filter (a symmetric matrix learned in place of a
// hand-specified adjacency).

#include <string>

#include "gcgrnn/tape.hpp"
#include "gcgrnn/types.hpp"

namespace gcgrnn {

/// Symmetric nonnegative sensor-correlation weights; entries at or below the
/// construction threshold are exactly zero.
class Adjacency {
 public:
  /// Validates symmetry and nonnegativity.
  explicit Adjacency(Mat weights);

  Eigen::Index size() const { return weights_.rows(); }
  const Mat& weights() const { return weights_; }

 private:
  Mat weights_;
};

/// Trainable unconstrained base whose effective filter is (base + base^T)/2,
/// symmetric by construction before and after every optimizer update.
struct DdgfFilter {
  Mat base;

  Mat effective() const { return 0.5 * (base + base.transpose()); }
};

/// A_ij = exp(-dist_ij / sigma^2) with sigma the population standard
/// deviation of the off-diagonal distances; entries at or below `threshold`
/// are zeroed. The diagonal is exp(0) = 1 and survives any threshold < 1.
Adjacency gaussian_adjacency(const Mat& dist, double threshold);

/// L = I - D^{-1/2} A D^{-1/2}. Diagnostic; not part of the model forward.
Mat normalized_laplacian(const Adjacency& a);

/// D~^{-1/2} (A + I) D~^{-1/2} X Theta with D~ the degree matrix of A + I.
Mat simplified_conv(const Adjacency& a, const Mat& x, const Mat& theta);

/// Effective-filter convolution: ((base + base^T)/2) X Theta, differentiable
/// in base, X and Theta. The degree normalization of the fixed-adjacency form
/// is absorbed into the learned filter.
template <typename Scalar>
Var<Scalar> ddgf_conv(Var<Scalar> base, Var<Scalar> x, Var<Scalar> theta) {
  return matmul(matmul(symmetrize(base), x), theta);
}

/// Value-only twin of the tape overload.
Mat ddgf_conv(const DdgfFilter& f, const Mat& x, const Mat& theta);

/// Writes an N x N matrix as CSV: N rows of comma-separated reals, no header.
void export_filter(const Mat& effective, const std::string& path);

}  // namespace gcgrnn
