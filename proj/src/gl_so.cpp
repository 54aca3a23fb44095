#include "manitrans/gl_so.hpp"
#include "manitrans/errors.hpp"

#include <cmath>
#include <sstream>

namespace manitrans {

namespace {

double bracket_norm(const Mat& a) { return norm1(a) + norm_inf(a); }

Mat top_skew(const Mat& m, Index d) {
  Mat out = Mat::Zero(m.rows(), m.cols());
  out.topLeftCorner(d, d) = skew(m.topLeftCorner(d, d));
  return out;
}

}  // namespace

// ---- GL+(n)

GLGeometry::GLGeometry(Index n, double beta)
    : n_(n), beta_(beta), group_(gl_split(n), MetricParams(1.0, beta)) {}

double GLGeometry::inner(const Mat& x, const Mat& xi, const Mat& eta) const {
  const Mat a = group_.relative(x, xi), b = group_.relative(x, eta);
  return frobenius_form(a, b) + (beta_ - 1.0) * frobenius_form(skew(a), skew(b));
}

Mat GLGeometry::christoffel(const Mat& x, const Mat& xi, const Mat& eta) const {
  return group_.christoffel(x, xi, eta);
}

Mat GLGeometry::geodesic(const Mat& x, const Mat& xi, double t) const {
  const Mat a = group_.relative(x, xi);
  const Mat first = 0.5 * t * ((1.0 - beta_) * a + (1.0 + beta_) * a.transpose());
  return x * matrix_exponential(first) * matrix_exponential(t * (1.0 + beta_) * skew(a));
}

Mat GLGeometry::geodesic_velocity(const Mat& x, const Mat& xi, double t) const {
  const Mat a = group_.relative(x, xi);
  const Mat first = 0.5 * t * ((1.0 - beta_) * a + (1.0 + beta_) * a.transpose());
  return x * matrix_exponential(first) * a * matrix_exponential(t * (1.0 + beta_) * skew(a));
}

LinearOperator GLGeometry::transport_operator(const Mat& a) const {
  if (a.rows() != n_ || a.cols() != n_) throw DimensionError("GLGeometry: bad shape");
  const double c = 1.0 + beta_;
  const Mat as = skew(a), at = a.transpose();
  LinearOperator op;
  op.rows = op.cols = n_;
  op.apply = [a, as, c](const Mat& b) -> Mat {
    return 0.5 * (bracket(b, a) + c * (bracket(as, b) - bracket(skew(b), a)));
  };
  // skew is self-adjoint and as^T = -as
  op.apply_adjoint = [at, as, c](const Mat& b) -> Mat {
    Mat ba = bracket(b, at);
    return 0.5 * (ba + c * (bracket(b, as) - skew(ba)));
  };
  op.one_norm_bound = n_ <= kExhaustiveNormMaxN
                          ? one_norm_exhaustive(op)
                          : 0.5 * (bracket_norm(a) + std::abs(c) * (bracket_norm(as) + bracket_norm(a)));
  return op;
}

Mat GLGeometry::transport(const Mat& x, const Mat& xi, const Mat& eta, double t,
                          const ExpaOptions& options) const {
  const Mat a = group_.relative(x, xi), b = group_.relative(x, eta);
  if (t == 0.0) return eta;
  const Mat first = 0.5 * t * ((1.0 - beta_) * a + (1.0 + beta_) * a.transpose());
  const Mat w = expa(transport_operator(a), b, t, options);
  return x * matrix_exponential(first) * w * matrix_exponential(t * (1.0 + beta_) * skew(a));
}

// ---- SO(n)

SOGeometry::SOGeometry(Index n, Index d, double alpha)
    : n_(n), d_(d), alpha_(alpha), group_(so_split(n, d), MetricParams(-0.5, alpha)) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ValidationError("SOGeometry: alpha must be positive");
}

void SOGeometry::check_point(const Mat& x) const {
  if (x.rows() != n_ || x.cols() != n_) throw DimensionError("SOGeometry: bad point shape");
  detail::require_finite(x, "SOGeometry");
  if (fro(x.transpose() * x - Mat::Identity(n_, n_)) > 1e-10)
    throw ValidationError("SOGeometry: point is not orthogonal");
  if (!(Eigen::PartialPivLU<Mat>(x).determinant() > 0.0))
    throw ValidationError("SOGeometry: point has negative determinant");
}

Mat SOGeometry::relative(const Mat& x, const Mat& v) const {
  check_point(x);
  detail::require_same_shape(x, v, "SOGeometry");
  Mat a = x.transpose() * v;
  if (fro(sym(a)) > kTangentTol * std::max(1.0, fro(a)))
    throw ValidationError("SOGeometry: vector is not tangent (X^T v not antisymmetric)");
  return a;
}

double SOGeometry::inner(const Mat& x, const Mat& xi, const Mat& eta) const {
  const Mat a = relative(x, xi), b = relative(x, eta);
  return 0.5 * frobenius_form(a, b) +
         (alpha_ - 0.5) * frobenius_form(a.topLeftCorner(d_, d_), b.topLeftCorner(d_, d_));
}

Mat SOGeometry::christoffel(const Mat& x, const Mat& xi, const Mat& eta) const {
  const Mat a = relative(x, xi), b = relative(x, eta);
  Mat out = 0.5 * x * (xi.transpose() * eta + eta.transpose() * xi);
  const double c = 0.5 * (1.0 - 2.0 * alpha_);
  if (c != 0.0) out += c * x * (bracket(top_skew(a, d_), b) + bracket(top_skew(b, d_), a));
  return out;
}

Mat SOGeometry::geodesic(const Mat& x, const Mat& xi, double t) const {
  const Mat a = relative(x, xi);
  Mat first = a;
  first.topLeftCorner(d_, d_) *= 2.0 * alpha_;
  Mat second = Mat::Zero(n_, n_);
  second.topLeftCorner(d_, d_) = (1.0 - 2.0 * alpha_) * a.topLeftCorner(d_, d_);
  return x * matrix_exponential(t * first) * matrix_exponential(t * second);
}

Mat SOGeometry::geodesic_velocity(const Mat& x, const Mat& xi, double t) const {
  const Mat a = relative(x, xi);
  Mat first = a;
  first.topLeftCorner(d_, d_) *= 2.0 * alpha_;
  Mat second = Mat::Zero(n_, n_);
  second.topLeftCorner(d_, d_) = (1.0 - 2.0 * alpha_) * a.topLeftCorner(d_, d_);
  return x * matrix_exponential(t * first) * a * matrix_exponential(t * second);
}

LinearOperator SOGeometry::transport_operator(const Mat& a) const {
  if (a.rows() != n_ || a.cols() != n_) throw DimensionError("SOGeometry: bad shape");
  const Index d = d_;
  const double c = 1.0 - 2.0 * alpha_;
  const Mat aa = top_skew(a, d), at = a.transpose();
  LinearOperator op;
  op.rows = op.cols = n_;
  op.apply = [a, aa, c, d](const Mat& b) -> Mat {
    return 0.5 * (bracket(b, a) + c * (bracket(aa, b) - bracket(top_skew(b, d), a)));
  };
  op.apply_adjoint = [at, aa, c, d](const Mat& b) -> Mat {
    Mat ba = bracket(b, at);
    return 0.5 * (ba + c * (bracket(b, aa) - top_skew(ba, d)));
  };
  op.one_norm_bound = n_ <= kExhaustiveNormMaxN
                          ? one_norm_exhaustive(op)
                          : 0.5 * (bracket_norm(a) + std::abs(c) * (bracket_norm(aa) + bracket_norm(a)));
  return op;
}

Mat SOGeometry::transport(const Mat& x, const Mat& xi, const Mat& eta, double t,
                          const ExpaOptions& options) const {
  const Mat a = relative(x, xi), b = relative(x, eta);
  if (t == 0.0) return eta;
  Mat first = a;
  first.topLeftCorner(d_, d_) *= 2.0 * alpha_;
  Mat second = Mat::Zero(n_, n_);
  second.topLeftCorner(d_, d_) = (1.0 - 2.0 * alpha_) * a.topLeftCorner(d_, d_);
  const Mat w = expa(transport_operator(a), b, t, options);
  return x * matrix_exponential(t * first) * w * matrix_exponential(t * second);
}

}  // namespace manitrans
