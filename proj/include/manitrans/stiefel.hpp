#pragma once

// Stiefel manifold St(n, d) with metric Tr xi^T eta + (alpha - 1) Tr xi^T Y Y^T eta.
// Geodesics and parallel transport in O(n d^2) through the decomposition
// xi = Y A + Q R; nothing n x n is formed on the fast path.

#include "manitrans/expaction.hpp"

#include <vector>

namespace manitrans {

/// Checks Y^T Y = I to tol. Throws ValidationError otherwise.
void check_stiefel_point(const Mat& y, double tol = 1e-10);
/// Checks (Y^T v)_sym = 0 relative to max(1, |v|).
void check_stiefel_tangent(const Mat& y, const Mat& v, double tol = 1e-9);
void check_alpha(double alpha);

/// W - Y sym(Y^T W).
Mat project_tangent(const Mat& y, const Mat& w);

double metric_inner(const Mat& y, const Mat& xi, const Mat& eta, double alpha);
/// No tangency check.
double metric_inner_unchecked(const Mat& y, const Mat& xi, const Mat& eta, double alpha);

struct TangentDecomposition {
  Mat a;  // d x d, antisymmetric
  Mat q;  // n x k, orthonormal, Y^T Q = 0
  Mat r;  // k x d
  Index k = 0;

  Index d() const { return a.rows(); }
};

enum class Factorization { pivoted_qr, svd };

/// xi = Y A + Q R with k the numerical rank of xi - Y A: singular values
/// (or QR pivots) above rank_tol * max(largest pivot, |xi|_F).
TangentDecomposition decompose_tangent(const Mat& y, const Mat& xi, double rank_tol = 1e-12,
                                       Factorization method = Factorization::pivoted_qr);

Mat stiefel_geodesic(const Mat& y, const Mat& xi, double alpha, double t);
Mat stiefel_geodesic_velocity(const Mat& y, const Mat& xi, double alpha, double t);

/// P_AR on (d + k) x d matrices [w_a; w_r]:
/// [((4a-1) w_a A + R^T w_r)_skew; a (w_r A - R w_a)].
Mat p_ar_apply(const TangentDecomposition& dec, double alpha, const Mat& w);
/// Frobenius adjoint of p_ar_apply.
Mat p_ar_adjoint(const TangentDecomposition& dec, double alpha, const Mat& w);

/// Scales the top d x d block by c.
Mat scale_top(const Mat& w, Index d, double c);
/// Antisymmetrizes the top d x d block.
Mat skew_top(const Mat& w, Index d);

/// P_AR itself; its 1-norm bound comes from the balanced bound and the
/// scaling.
LinearOperator p_ar_operator(const TangentDecomposition& dec, double alpha);
/// s_sqrt(a) o P_AR o s_1/sqrt(a) with p_bal_norm_bound.
LinearOperator p_bal_operator(const TangentDecomposition& dec, double alpha);

/// max(n_A, n_R) with n_A = |4a-1| max_j sum_r |a_jr| + sqrt(a) |R|_1 and
/// n_R = sqrt(a) |R|_inf + a |A|_inf, from bounding each basis image.
double p_bal_norm_bound(const TangentDecomposition& dec, double alpha);
/// The same bound with the grouping n_A = sqrt(a) (|R|_1 + d |4a-1| |A|_1),
/// n_R = a |A|_1 + a^{3/2} d |R|_inf. Kept for comparison; not used.
double p_bal_norm_bound_display(const TangentDecomposition& dec, double alpha);

/// Geodesic from Y with velocity xi, prepared for repeated transports.
class StiefelTransportPlan {
 public:
  StiefelTransportPlan(const Mat& y, const Mat& xi, double alpha,
                       Factorization method = Factorization::pivoted_qr);

  const TangentDecomposition& decomposition() const { return dec_; }
  double alpha() const { return alpha_; }
  const Mat& y() const { return y_; }
  /// [[2 alpha A, -R^T], [R, 0]]
  const Mat& big_exp_arg() const { return big_; }
  const LinearOperator& balanced_operator() const { return p_bal_; }

  Mat geodesic(double t) const;
  Mat velocity(double t) const;
  Mat transport(const Mat& eta, double t, const ExpaOptions& options = {}) const;
  /// All vectors at one t, sharing the exponentials.
  std::vector<Mat> transport(const std::vector<Mat>& etas, double t,
                             const ExpaOptions& options = {}) const;

 private:
  Mat y_, f_, big_;
  TangentDecomposition dec_;
  double alpha_;
  LinearOperator p_bal_;
};

Mat stiefel_transport(const Mat& y, const Mat& xi, const Mat& eta, double alpha, double t,
                      const ExpaOptions& options = {});

/// 1/2 Y (xi^T eta + eta^T xi) + (1 - alpha)(I - Y Y^T)(xi eta^T + eta xi^T) Y.
Mat stiefel_christoffel(const Mat& y, const Mat& xi, const Mat& eta, double alpha);

/// Orthonormal Y_perp with det [Y | Y_perp] = 1. O(n^3).
Mat complete_orthonormal(const Mat& y);

/// [xi | -Y xi^T Y_perp]: the horizontal lift to SO(n) at [Y | Y_perp].
Mat horizontal_lift(const Mat& y, const Mat& y_perp, const Mat& xi);

}  // namespace manitrans
