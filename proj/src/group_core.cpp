#include "manitrans/group_core.hpp"
#include "manitrans/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace manitrans {

namespace {

double bracket_norm(const Mat& a) { return norm1(a) + norm_inf(a); }

}  // namespace

GroupGeometry::GroupGeometry(AlgebraSplit split, MetricParams params, bool validate)
    : split_(std::move(split)), params_(params) {
  if (split_.n < 1 || !split_.proj_g || !split_.proj_a)
    throw ValidationError("GroupGeometry: incomplete split");
  if (validate && split_.n <= 64) validate_split(split_);
  signature_ = classify_metric_signature(split_, params_);
}

void GroupGeometry::check_point(const Mat& x, std::string_view what) const {
  if (x.rows() != n() || x.cols() != n()) {
    std::ostringstream os;
    os << what << ": group element must be " << n() << "x" << n();
    throw DimensionError(os.str());
  }
  detail::require_finite(x, what);
}

Mat GroupGeometry::relative(const Mat& x, const Mat& v) const {
  check_point(x, "GroupGeometry");
  detail::require_same_shape(x, v, "GroupGeometry");
  detail::require_finite(v, "GroupGeometry");
  Eigen::PartialPivLU<Mat> lu(x);
  const double rc = lu.rcond();
  if (!(rc > std::numeric_limits<double>::epsilon()))
    throw LinearSolveError("GroupGeometry: group element is singular");
  if (rc < 1e-12) {
    std::ostringstream os;
    os << "group element is ill-conditioned (estimated condition " << 1.0 / rc << ")";
    detail::warn(os.str());
  }
  Mat a = lu.solve(v);
  if (!in_subspace(split_.proj_g, a, kTangentTol))
    throw ValidationError("GroupGeometry: vector is not tangent (X^{-1} v not in the algebra)");
  return a;
}

double GroupGeometry::inner(const Mat& x, const Mat& xi, const Mat& eta) const {
  return beta_form_unchecked(relative(x, xi), relative(x, eta), split_, params_);
}

Mat GroupGeometry::christoffel(const Mat& x, const Mat& xi, const Mat& eta) const {
  const Mat a = relative(x, xi), b = relative(x, eta);
  const double c = 0.5 * (1.0 + params_.beta());
  Mat out = -0.5 * (xi * b + eta * a);
  if (c != 0.0) out += c * x * (bracket(split_.proj_a(a), b) + bracket(split_.proj_a(b), a));
  return out;
}

GroupGeometry::Path GroupGeometry::path(const Mat& x, const Mat& xi) const {
  Path p;
  p.x = x;
  p.a = relative(x, xi);
  p.a_second = (1.0 + params_.beta()) * split_.proj_a(p.a);
  p.a_first = p.a - p.a_second;
  return p;
}

Mat GroupGeometry::geodesic(const Path& p, double t) const {
  return p.x * matrix_exponential(t * p.a_first) * matrix_exponential(t * p.a_second);
}

Mat GroupGeometry::geodesic(const Mat& x, const Mat& xi, double t) const {
  return geodesic(path(x, xi), t);
}

Mat GroupGeometry::geodesic_velocity(const Mat& x, const Mat& xi, double t) const {
  const Path p = path(x, xi);
  // the second factor commutes with a_second, so d/dt collapses to E1 a E2
  return p.x * matrix_exponential(t * p.a_first) * p.a * matrix_exponential(t * p.a_second);
}

double GroupGeometry::transport_operator_bound(const Mat& a) const {
  const Mat aa = split_.proj_a(a);
  const double m = bracket_norm(a);
  return 0.5 * (m + std::abs(1.0 + params_.beta()) *
                        (bracket_norm(aa) + split_.proj_a_one_norm * m));
}

LinearOperator GroupGeometry::transport_operator(const Mat& a) const {
  if (a.rows() != n() || a.cols() != n()) throw DimensionError("transport_operator: bad shape");
  if (!in_subspace(split_.proj_g, a, kTangentTol))
    throw ValidationError("transport_operator: a is not in the Lie algebra");
  const double c = 1.0 + params_.beta();
  const Mat aa = split_.proj_a(a);
  const Mat at = a.transpose();
  const Mat aat = aa.transpose();
  MatrixMap pa = split_.proj_a;

  LinearOperator op;
  op.rows = op.cols = n();
  op.apply = [a, aa, c, pa](const Mat& b) -> Mat {
    Mat out = bracket(b, a);
    if (c != 0.0) out += c * (bracket(aa, b) - bracket(pa(b), a));
    return 0.5 * out;
  };
  op.apply_adjoint = [at, aat, c, pa](const Mat& b) -> Mat {
    Mat ba = bracket(b, at);
    Mat out = ba;
    if (c != 0.0) out += c * (bracket(aat, b) - pa(ba));
    return 0.5 * out;
  };
  op.one_norm_bound =
      n() <= kExhaustiveNormMaxN ? one_norm_exhaustive(op) : transport_operator_bound(a);
  return op;
}

Mat GroupGeometry::transport(const Path& p, const Mat& eta, double t,
                             const ExpaOptions& options) const {
  const Mat b = relative(p.x, eta);
  if (t == 0.0) return eta;
  const LinearOperator op = transport_operator(p.a);
  const Mat w = expa(op, b, t, options);
  return p.x * matrix_exponential(t * p.a_first) * w * matrix_exponential(t * p.a_second);
}

Mat GroupGeometry::transport(const Mat& x, const Mat& xi, const Mat& eta, double t,
                             const ExpaOptions& options) const {
  return transport(path(x, xi), eta, t, options);
}

}  // namespace manitrans
