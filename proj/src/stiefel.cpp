#include "manitrans/stiefel.hpp"
#include "manitrans/errors.hpp"

#include <cmath>
#include <sstream>

namespace manitrans {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ValidationError("alpha must be positive and finite");
}

void check_stiefel_point(const Mat& y, double tol) {
  if (y.cols() < 1 || y.rows() <= y.cols()) {
    std::ostringstream os;
    os << "Stiefel point must be n x d with n > d >= 1, got " << y.rows() << "x" << y.cols();
    throw DimensionError(os.str());
  }
  detail::require_finite(y, "Stiefel point");
  const double e = fro(y.transpose() * y - Mat::Identity(y.cols(), y.cols()));
  if (e > tol) {
    std::ostringstream os;
    os << "Stiefel point columns are not orthonormal (|Y^T Y - I| = " << e << ")";
    throw ValidationError(os.str());
  }
}

void check_stiefel_tangent(const Mat& y, const Mat& v, double tol) {
  detail::require_same_shape(y, v, "Stiefel tangent");
  detail::require_finite(v, "Stiefel tangent");
  const double e = fro(sym(y.transpose() * v));
  if (e > tol * std::max(1.0, fro(v))) {
    std::ostringstream os;
    os << "vector is not tangent to the Stiefel manifold (|sym(Y^T v)| = " << e << ")";
    throw ValidationError(os.str());
  }
}

Mat project_tangent(const Mat& y, const Mat& w) {
  detail::require_same_shape(y, w, "project_tangent");
  return w - y * sym(y.transpose() * w);
}

double metric_inner_unchecked(const Mat& y, const Mat& xi, const Mat& eta, double alpha) {
  const double plain = (xi.array() * eta.array()).sum();
  if (alpha == 1.0) return plain;
  const Mat yx = y.transpose() * xi, ye = y.transpose() * eta;
  return plain + (alpha - 1.0) * (yx.array() * ye.array()).sum();
}

double metric_inner(const Mat& y, const Mat& xi, const Mat& eta, double alpha) {
  check_alpha(alpha);
  check_stiefel_tangent(y, xi);
  check_stiefel_tangent(y, eta);
  return metric_inner_unchecked(y, xi, eta, alpha);
}

TangentDecomposition decompose_tangent(const Mat& y, const Mat& xi, double rank_tol,
                                       Factorization method) {
  check_stiefel_point(y);
  check_stiefel_tangent(y, xi);
  const Index n = y.rows(), d = y.cols();
  TangentDecomposition dec;
  dec.a = skew(y.transpose() * xi);
  const Mat rest = xi - y * dec.a;
  const double floor = fro(xi);

  Mat basis;
  if (method == Factorization::svd) {
    Eigen::JacobiSVD<Mat> svd(rest, Eigen::ComputeThinU);
    const Vec& sv = svd.singularValues();
    const double cut = rank_tol * std::max(sv.size() ? sv(0) : 0.0, floor);
    Index k = 0;
    while (k < sv.size() && sv(k) > cut) ++k;
    basis = svd.matrixU().leftCols(k);
  } else {
    Eigen::ColPivHouseholderQR<Mat> qr(rest);
    const auto& r = qr.matrixR();
    const Index m = std::min(n, d);
    const double top = m ? std::abs(r(0, 0)) : 0.0;
    const double cut = rank_tol * std::max(top, floor);
    Index k = 0;
    while (k < m && std::abs(r(k, k)) > cut) ++k;
    basis = qr.householderQ() * Mat::Identity(n, k);
  }

  if (basis.cols() > 0) {
    // near-rank-deficient columns can pick up a component along Y
    basis -= y * (y.transpose() * basis);
    Eigen::HouseholderQR<Mat> re(basis);
    basis = re.householderQ() * Mat::Identity(n, basis.cols());
  }
  dec.q = basis;
  dec.k = basis.cols();
  dec.r = dec.q.transpose() * rest;
  return dec;
}

namespace {

Mat big_arg(const TangentDecomposition& dec, double alpha) {
  const Index d = dec.d(), k = dec.k;
  Mat big = Mat::Zero(d + k, d + k);
  big.topLeftCorner(d, d) = 2.0 * alpha * dec.a;
  if (k > 0) {
    big.bottomLeftCorner(k, d) = dec.r;
    big.topRightCorner(d, k) = -dec.r.transpose();
  }
  return big;
}

Mat frame(const Mat& y, const TangentDecomposition& dec) {
  Mat f(y.rows(), y.cols() + dec.k);
  f << y, dec.q;
  return f;
}

}  // namespace

Mat stiefel_geodesic(const Mat& y, const Mat& xi, double alpha, double t) {
  check_alpha(alpha);
  const auto dec = decompose_tangent(y, xi);
  const Index d = dec.d();
  const Mat e = matrix_exponential(t * big_arg(dec, alpha));
  return frame(y, dec) * (e.leftCols(d) * matrix_exponential((1.0 - 2.0 * alpha) * t * dec.a));
}

Mat stiefel_geodesic_velocity(const Mat& y, const Mat& xi, double alpha, double t) {
  check_alpha(alpha);
  const auto dec = decompose_tangent(y, xi);
  const Index d = dec.d(), k = dec.k;
  const Mat e = matrix_exponential(t * big_arg(dec, alpha));
  Mat gen(d + k, d);  // [[A, -R^T], [R, 0]] [I; 0]
  gen << dec.a, dec.r;
  return frame(y, dec) * (e * gen * matrix_exponential((1.0 - 2.0 * alpha) * t * dec.a));
}

Mat scale_top(const Mat& w, Index d, double c) {
  Mat out = w;
  out.topRows(d) *= c;
  return out;
}

Mat skew_top(const Mat& w, Index d) {
  Mat out = w;
  out.topRows(d) = skew(w.topRows(d));
  return out;
}

namespace {

void check_f_shape(const TangentDecomposition& dec, const Mat& w, std::string_view what) {
  if (w.rows() != dec.d() + dec.k || w.cols() != dec.d()) {
    std::ostringstream os;
    os << what << ": expected " << dec.d() + dec.k << "x" << dec.d() << ", got " << w.rows()
       << "x" << w.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

Mat p_ar_apply(const TangentDecomposition& dec, double alpha, const Mat& w) {
  check_f_shape(dec, w, "p_ar_apply");
  const Index d = dec.d(), k = dec.k;
  const auto wa = w.topRows(d);
  Mat out(d + k, d);
  Mat top = (4.0 * alpha - 1.0) * (wa * dec.a);
  if (k > 0) {
    const auto wr = w.bottomRows(k);
    top.noalias() += dec.r.transpose() * wr;
    out.bottomRows(k) = alpha * (wr * dec.a - dec.r * wa);
  }
  out.topRows(d) = skew(top);
  return out;
}

Mat p_ar_adjoint(const TangentDecomposition& dec, double alpha, const Mat& w) {
  check_f_shape(dec, w, "p_ar_adjoint");
  const Index d = dec.d(), k = dec.k;
  const Mat va = skew(w.topRows(d));
  Mat out(d + k, d);
  Mat top = -(4.0 * alpha - 1.0) * (va * dec.a);
  if (k > 0) {
    const auto vr = w.bottomRows(k);
    top.noalias() -= alpha * (dec.r.transpose() * vr);
    out.bottomRows(k) = dec.r * va - alpha * (vr * dec.a);
  }
  out.topRows(d) = top;
  return out;
}

double p_bal_norm_bound(const TangentDecomposition& dec, double alpha) {
  const double sa = std::sqrt(alpha);
  const double a_rows = norm_inf(dec.a);
  const double n_a = std::abs(4.0 * alpha - 1.0) * a_rows + sa * norm1(dec.r);
  const double n_r = dec.k > 0 ? sa * norm_inf(dec.r) + alpha * a_rows : 0.0;
  return std::max(n_a, n_r);
}

double p_bal_norm_bound_display(const TangentDecomposition& dec, double alpha) {
  const double sa = std::sqrt(alpha);
  const double d = static_cast<double>(dec.d());
  const double n_a = sa * (norm1(dec.r) + d * std::abs(4.0 * alpha - 1.0) * norm1(dec.a));
  const double n_r = alpha * norm1(dec.a) + alpha * sa * d * norm_inf(dec.r);
  return std::max(n_a, n_r);
}

LinearOperator p_bal_operator(const TangentDecomposition& dec, double alpha) {
  check_alpha(alpha);
  const Index d = dec.d();
  const double sa = std::sqrt(alpha);
  LinearOperator op;
  op.rows = d + dec.k;
  op.cols = d;
  op.apply = [dec, alpha, d, sa](const Mat& w) -> Mat {
    return scale_top(p_ar_apply(dec, alpha, scale_top(w, d, 1.0 / sa)), d, sa);
  };
  op.apply_adjoint = [dec, alpha, d, sa](const Mat& w) -> Mat {
    return scale_top(p_ar_adjoint(dec, alpha, scale_top(w, d, sa)), d, 1.0 / sa);
  };
  op.one_norm_bound = p_bal_norm_bound(dec, alpha);
  return op;
}

LinearOperator p_ar_operator(const TangentDecomposition& dec, double alpha) {
  check_alpha(alpha);
  const double sa = std::sqrt(alpha);
  LinearOperator op;
  op.rows = dec.d() + dec.k;
  op.cols = dec.d();
  op.apply = [dec, alpha](const Mat& w) -> Mat { return p_ar_apply(dec, alpha, w); };
  op.apply_adjoint = [dec, alpha](const Mat& w) -> Mat { return p_ar_adjoint(dec, alpha, w); };
  // |s^-1 P_bal s|_1 <= |s^-1|_1 |P_bal|_1 |s|_1
  op.one_norm_bound = std::max(1.0, 1.0 / sa) * std::max(1.0, sa) * p_bal_norm_bound(dec, alpha);
  return op;
}

StiefelTransportPlan::StiefelTransportPlan(const Mat& y, const Mat& xi, double alpha,
                                           Factorization method)
    : y_(y), alpha_(alpha) {
  check_alpha(alpha);
  dec_ = decompose_tangent(y, xi, 1e-12, method);
  f_ = frame(y, dec_);
  big_ = big_arg(dec_, alpha);
  p_bal_ = p_bal_operator(dec_, alpha);
}

Mat StiefelTransportPlan::geodesic(double t) const {
  const Mat e = matrix_exponential(t * big_);
  return f_ * (e.leftCols(dec_.d()) * matrix_exponential((1.0 - 2.0 * alpha_) * t * dec_.a));
}

Mat StiefelTransportPlan::velocity(double t) const {
  const Index d = dec_.d(), k = dec_.k;
  const Mat e = matrix_exponential(t * big_);
  Mat gen(d + k, d);
  gen << dec_.a, dec_.r;
  return f_ * (e * gen * matrix_exponential((1.0 - 2.0 * alpha_) * t * dec_.a));
}

std::vector<Mat> StiefelTransportPlan::transport(const std::vector<Mat>& etas, double t,
                                                 const ExpaOptions& options) const {
  for (const auto& eta : etas) check_stiefel_tangent(y_, eta);
  std::vector<Mat> out;
  out.reserve(etas.size());
  if (t == 0.0) {
    out = etas;
    return out;
  }
  const Index d = dec_.d();
  const double sa = std::sqrt(alpha_);
  const Mat e_big = matrix_exponential(t * big_);
  const Mat e_small = matrix_exponential((1.0 - 2.0 * alpha_) * t * dec_.a);
  const Mat e_normal = matrix_exponential((1.0 - alpha_) * t * dec_.a);
  for (const auto& eta : etas) {
    const Mat coef = f_.transpose() * eta;  // [Y^T eta; Q^T eta]
    const Mat normal = eta - f_ * coef;
    Mat w = scale_top(expa(p_bal_, scale_top(skew_top(coef, d), d, sa), t, options), d, 1.0 / sa);
    out.push_back(f_ * (e_big * w * e_small) + normal * e_normal);
  }
  return out;
}

Mat StiefelTransportPlan::transport(const Mat& eta, double t, const ExpaOptions& options) const {
  return transport(std::vector<Mat>{eta}, t, options).front();
}

Mat stiefel_transport(const Mat& y, const Mat& xi, const Mat& eta, double alpha, double t,
                      const ExpaOptions& options) {
  return StiefelTransportPlan(y, xi, alpha).transport(eta, t, options);
}

Mat stiefel_christoffel(const Mat& y, const Mat& xi, const Mat& eta, double alpha) {
  detail::require_same_shape(y, xi, "stiefel_christoffel");
  detail::require_same_shape(y, eta, "stiefel_christoffel");
  const Mat xte = xi.transpose() * eta;
  Mat out = y * (0.5 * (xte + xte.transpose()));
  if (alpha != 1.0) {
    // (xi eta^T + eta xi^T) Y without the n x n product
    Mat m = xi * (eta.transpose() * y) + eta * (xi.transpose() * y);
    m -= y * (y.transpose() * m);
    out += (1.0 - alpha) * m;
  }
  return out;
}

Mat complete_orthonormal(const Mat& y) {
  check_stiefel_point(y);
  const Index n = y.rows(), d = y.cols();
  Eigen::HouseholderQR<Mat> qr(y);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  Mat perp = q.rightCols(n - d);
  Mat full(n, n);
  full << y, perp;
  if (Eigen::PartialPivLU<Mat>(full).determinant() < 0.0) perp.col(n - d - 1) *= -1.0;
  return perp;
}

Mat horizontal_lift(const Mat& y, const Mat& y_perp, const Mat& xi) {
  check_stiefel_point(y);
  const Index n = y.rows(), d = y.cols();
  if (y_perp.rows() != n || y_perp.cols() != n - d)
    throw DimensionError("horizontal_lift: Y_perp must be n x (n - d)");
  Mat x(n, n);
  x << y, y_perp;
  if (fro(x.transpose() * x - Mat::Identity(n, n)) > 1e-10)
    throw ValidationError("horizontal_lift: [Y | Y_perp] is not orthogonal");
  check_stiefel_tangent(y, xi);
  Mat lift(n, n);
  lift << xi, -y * (xi.transpose() * y_perp);
  return lift;
}

}  // namespace manitrans
