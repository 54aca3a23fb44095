#pragma once

// Left-invariant metrics on a matrix group G with transposable Lie algebra
// g and subalgebra a: Christoffel function, closed-form geodesics, and
// parallel transport through the exponential action of P_a.

#include "manitrans/expaction.hpp"
#include "manitrans/forms.hpp"

namespace manitrans {

/// Relative tolerance for X^{-1} xi in g.
inline constexpr double kTangentTol = 1e-9;

class GroupGeometry {
 public:
  /// validate runs the random-probe split checks (skipped above n = 64).
  GroupGeometry(AlgebraSplit split, MetricParams params, bool validate = true);

  const AlgebraSplit& split() const { return split_; }
  const MetricParams& params() const { return params_; }
  const SignatureSummary& signature() const { return signature_; }
  Index n() const { return split_.n; }
  bool riemannian() const { return signature_.kind == Signature::riemannian; }

  /// X^{-1} v by LU solve; throws LinearSolveError for singular X and
  /// ValidationError if the result is not in g.
  Mat relative(const Mat& x, const Mat& v) const;

  /// <xi, eta> at X.
  double inner(const Mat& x, const Mat& xi, const Mat& eta) const;

  Mat christoffel(const Mat& x, const Mat& xi, const Mat& eta) const;

  Mat geodesic(const Mat& x, const Mat& xi, double t) const;
  Mat geodesic_velocity(const Mat& x, const Mat& xi, double t) const;

  /// P_a b = 1/2 ([b,a] + (1+beta)([a_a, b] - [b_a, a])) as an operator on
  /// n x n matrices, with its Frobenius adjoint.
  LinearOperator transport_operator(const Mat& a) const;

  /// 1-norm bound of P_a from the triangle inequality.
  double transport_operator_bound(const Mat& a) const;

  Mat transport(const Mat& x, const Mat& xi, const Mat& eta, double t,
                const ExpaOptions& options = {}) const;

  /// Cached factors of one geodesic, reused for many (eta, t).
  struct Path {
    Mat x;
    Mat a;        // X^{-1} xi
    Mat a_first;  // a - (1+beta) a_a
    Mat a_second; // (1+beta) a_a
  };
  Path path(const Mat& x, const Mat& xi) const;
  Mat geodesic(const Path& p, double t) const;
  Mat transport(const Path& p, const Mat& eta, double t, const ExpaOptions& options = {}) const;

 private:
  void check_point(const Mat& x, std::string_view what) const;

  AlgebraSplit split_;
  MetricParams params_;
  SignatureSummary signature_;
};

/// Largest domain on which transport_operator uses the exact vectorized
/// 1-norm instead of the triangle bound.
inline constexpr Index kExhaustiveNormMaxN = 8;

}  // namespace manitrans
