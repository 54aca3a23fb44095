#pragma once

// GL+(n) with a = so(n), and SO(n) with a = so(d) in the top-left block.
// Explicit formulas; the generic GroupGeometry is kept alongside for
// cross-checks.

#include "manitrans/group_core.hpp"

namespace manitrans {

/// Metric |g|_F^2 + (beta - 1)|g_skew|_F^2 on X^{-1} xi (beta0 = 1).
class GLGeometry {
 public:
  GLGeometry(Index n, double beta);

  Index n() const { return n_; }
  double beta() const { return beta_; }
  const GroupGeometry& group() const { return group_; }

  double inner(const Mat& x, const Mat& xi, const Mat& eta) const;
  Mat christoffel(const Mat& x, const Mat& xi, const Mat& eta) const;
  Mat geodesic(const Mat& x, const Mat& xi, double t) const;
  Mat geodesic_velocity(const Mat& x, const Mat& xi, double t) const;
  LinearOperator transport_operator(const Mat& a) const;
  Mat transport(const Mat& x, const Mat& xi, const Mat& eta, double t,
                const ExpaOptions& options = {}) const;

 private:
  Index n_;
  double beta_;
  GroupGeometry group_;
};

/// beta0 = -1/2, beta1 = alpha, so beta = -2 alpha; inner product
/// 1/2 Tr xi^T eta + (alpha - 1/2) Tr A_xi^T A_eta.
class SOGeometry {
 public:
  SOGeometry(Index n, Index d, double alpha);

  Index n() const { return n_; }
  Index d() const { return d_; }
  double alpha() const { return alpha_; }
  const GroupGeometry& group() const { return group_; }

  /// Orthogonality to 1e-10 and positive determinant.
  void check_point(const Mat& x) const;
  /// X^T v, checked antisymmetric.
  Mat relative(const Mat& x, const Mat& v) const;

  double inner(const Mat& x, const Mat& xi, const Mat& eta) const;
  Mat christoffel(const Mat& x, const Mat& xi, const Mat& eta) const;
  Mat geodesic(const Mat& x, const Mat& xi, double t) const;
  Mat geodesic_velocity(const Mat& x, const Mat& xi, double t) const;
  LinearOperator transport_operator(const Mat& a) const;
  Mat transport(const Mat& x, const Mat& xi, const Mat& eta, double t,
                const ExpaOptions& options = {}) const;

 private:
  Index n_, d_;
  double alpha_;
  GroupGeometry group_;
};

}  // namespace manitrans
