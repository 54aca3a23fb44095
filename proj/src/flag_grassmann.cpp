#include "manitrans/flag_grassmann.hpp"
#include "manitrans/errors.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace manitrans {

FlagSignature::FlagSignature(std::vector<Index> d_list, Index n)
    : d_list_(std::move(d_list)), n_(n) {
  if (d_list_.empty()) throw DimensionError("FlagSignature: need at least one block");
  Index off = 0;
  for (Index di : d_list_) {
    if (di < 1) throw DimensionError("FlagSignature: block sizes must be positive");
    offsets_.push_back(off);
    off += di;
  }
  d_ = off;
  if (d_ >= n_) {
    std::ostringstream os;
    os << "FlagSignature: blocks sum to " << d_ << ", which must be less than n = " << n_;
    throw DimensionError(os.str());
  }
}

Mat FlagSignature::zero_blocks(const Mat& m) const {
  Mat out = m;
  for (std::size_t i = 0; i < d_list_.size(); ++i)
    out.block(offsets_[i], offsets_[i], d_list_[i], d_list_[i]).setZero();
  return out;
}

Mat FlagSignature::keep_blocks(const Mat& m) const {
  Mat out = Mat::Zero(m.rows(), m.cols());
  for (std::size_t i = 0; i < d_list_.size(); ++i) {
    const Index o = offsets_[i], s = d_list_[i];
    out.block(o, o, s, s) = m.block(o, o, s, s);
  }
  return out;
}

Mat FlagSignature::zero_top_blocks(const Mat& w) const {
  Mat out = w;
  for (std::size_t i = 0; i < d_list_.size(); ++i)
    out.block(offsets_[i], offsets_[i], d_list_[i], d_list_[i]).setZero();
  return out;
}

namespace {

void check_sig(const FlagSignature& sig, const Mat& y, std::string_view what) {
  if (y.rows() != sig.n() || y.cols() != sig.d()) {
    std::ostringstream os;
    os << what << ": expected " << sig.n() << "x" << sig.d() << ", got " << y.rows() << "x"
       << y.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

Mat flag_horizontal_project(const FlagSignature& sig, const Mat& y, const Mat& w) {
  check_sig(sig, y, "flag_horizontal_project");
  check_sig(sig, w, "flag_horizontal_project");
  Mat eta = project_tangent(y, w);
  return eta - y * sig.keep_blocks(y.transpose() * eta);
}

void check_flag_horizontal(const FlagSignature& sig, const Mat& y, const Mat& v, double tol) {
  check_sig(sig, v, "flag tangent");
  check_stiefel_tangent(y, v, tol);
  const double e = fro(sig.keep_blocks(y.transpose() * v));
  if (e > tol * std::max(1.0, fro(v))) {
    std::ostringstream os;
    os << "vector is not horizontal for the flag manifold (block residual " << e << ")";
    throw ValidationError(os.str());
  }
}

Mat symf(const FlagSignature& sig, const Mat& m) {
  if (m.rows() != sig.d() || m.cols() != sig.d()) throw DimensionError("symf: expected d x d");
  return sym(m) + sig.keep_blocks(skew(m));
}

Mat flag_christoffel(const FlagSignature& sig, const Mat& y, const Mat& xi, const Mat& eta,
                     double alpha) {
  check_sig(sig, y, "flag_christoffel");
  check_sig(sig, xi, "flag_christoffel");
  check_sig(sig, eta, "flag_christoffel");
  Mat out = y * symf(sig, xi.transpose() * eta);
  if (alpha != 1.0) {
    Mat m = xi * (eta.transpose() * y) + eta * (xi.transpose() * y);
    m -= y * (y.transpose() * m);
    out += (1.0 - alpha) * m;
  }
  return out;
}

Mat flag_geodesic(const FlagSignature& sig, const Mat& y, const Mat& xi, double alpha,
                  double t) {
  check_sig(sig, y, "flag_geodesic");
  check_stiefel_point(y);
  check_flag_horizontal(sig, y, xi);
  return stiefel_geodesic(y, xi, alpha, t);
}

LinearOperator flag_p_operator(const FlagSignature& sig, const TangentDecomposition& dec) {
  LinearOperator op = p_bal_operator(dec, 0.5);
  auto apply = op.apply, adj = op.apply_adjoint;
  op.apply = [sig, apply](const Mat& w) -> Mat { return sig.zero_top_blocks(apply(w)); };
  op.apply_adjoint = [sig, adj](const Mat& w) -> Mat { return adj(sig.zero_top_blocks(w)); };
  // masking cannot increase any column's 1-norm
  return op;
}

FlagTransportPlan::FlagTransportPlan(FlagSignature sig, const Mat& y, const Mat& xi)
    : sig_(std::move(sig)), y_(y) {
  check_sig(sig_, y, "FlagTransportPlan");
  check_flag_horizontal(sig_, y, xi);
  dec_ = decompose_tangent(y, xi);
  const Index d = dec_.d(), k = dec_.k;
  f_.resize(y.rows(), d + k);
  f_ << y, dec_.q;
  big_ = Mat::Zero(d + k, d + k);
  big_.topLeftCorner(d, d) = dec_.a;
  if (k > 0) {
    big_.bottomLeftCorner(k, d) = dec_.r;
    big_.topRightCorner(d, k) = -dec_.r.transpose();
  }
  p_ = flag_p_operator(sig_, dec_);
}

Mat FlagTransportPlan::geodesic(double t) const {
  return f_ * matrix_exponential(t * big_).leftCols(dec_.d());
}

Mat FlagTransportPlan::velocity(double t) const {
  const Index d = dec_.d(), k = dec_.k;
  Mat gen(d + k, d);
  gen << dec_.a, dec_.r;
  return f_ * (matrix_exponential(t * big_) * gen);
}

std::vector<Mat> FlagTransportPlan::transport(const std::vector<Mat>& etas, double t,
                                              const ExpaOptions& options) const {
  for (const auto& eta : etas) check_flag_horizontal(sig_, y_, eta);
  if (t == 0.0) return etas;
  const Index d = dec_.d();
  const double sa = std::sqrt(0.5);
  const Mat e_big = matrix_exponential(t * big_);
  const Mat e_normal = matrix_exponential(0.5 * t * dec_.a);
  std::vector<Mat> out;
  out.reserve(etas.size());
  for (const auto& eta : etas) {
    const Mat coef = f_.transpose() * eta;
    const Mat normal = eta - f_ * coef;
    const Mat w0 = sig_.zero_top_blocks(skew_top(coef, d));
    const Mat w = scale_top(expa(p_, scale_top(w0, d, sa), t, options), d, 1.0 / sa);
    out.push_back(f_ * (e_big * w) + normal * e_normal);
  }
  return out;
}

Mat FlagTransportPlan::transport(const Mat& eta, double t, const ExpaOptions& options) const {
  return transport(std::vector<Mat>{eta}, t, options).front();
}

Mat flag_transport_canonical(const FlagSignature& sig, const Mat& y, const Mat& xi,
                             const Mat& eta, double t, const ExpaOptions& options) {
  return FlagTransportPlan(sig, y, xi).transport(eta, t, options);
}

namespace {

void check_grassmann_horizontal(const Mat& y, const Mat& v, std::string_view what) {
  detail::require_same_shape(y, v, what);
  detail::require_finite(v, what);
  if (fro(y.transpose() * v) > 1e-9 * std::max(1.0, fro(v)))
    throw ValidationError(std::string(what) + ": vector must satisfy Y^T v = 0");
}

struct CompactSvd {
  Mat q;    // n x k
  Vec s;    // k
  Mat v;    // d x k
};

CompactSvd compact_svd(const Mat& xi) {
  Eigen::JacobiSVD<Mat> svd(xi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& sv = svd.singularValues();
  const double cut = 1e-12 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Index k = 0;
  while (k < sv.size() && sv(k) > cut) ++k;
  return {svd.matrixU().leftCols(k), sv.head(k), svd.matrixV().leftCols(k)};
}

}  // namespace

Mat grassmann_geodesic(const Mat& y, const Mat& xi, double t) {
  check_stiefel_point(y);
  check_grassmann_horizontal(y, xi, "grassmann_geodesic");
  if (t == 0.0) return y;
  const auto [q, s, v] = compact_svd(xi);
  const Vec c = (t * s).array().cos(), sn = (t * s).array().sin();
  const Mat yv = y * v;
  return y + (yv * c.asDiagonal() - yv + q * sn.asDiagonal()) * v.transpose();
}

Mat grassmann_transport(const Mat& y, const Mat& xi, const Mat& eta, double t) {
  check_stiefel_point(y);
  check_grassmann_horizontal(y, xi, "grassmann_transport");
  check_grassmann_horizontal(y, eta, "grassmann_transport");
  if (t == 0.0) return eta;
  const auto [q, s, v] = compact_svd(xi);
  const Vec c = (t * s).array().cos(), sn = (t * s).array().sin();
  const Mat qe = q.transpose() * eta;
  return -(y * v) * (sn.asDiagonal() * qe) + q * (c.asDiagonal() * qe) + eta - q * qe;
}

}  // namespace manitrans
