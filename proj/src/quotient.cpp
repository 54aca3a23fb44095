#include "manitrans/quotient.hpp"
#include "manitrans/errors.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace manitrans {

namespace {

double bracket_norm(const Mat& a) { return norm1(a) + norm_inf(a); }

Mat randn(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  return Mat::NullaryExpr(n, n, [&] { return g(rng); });
}

bool close(const Mat& a, const Mat& b, double tol) {
  return fro(a - b) <= tol * std::max(1.0, fro(a) + fro(b));
}

}  // namespace

AlgebraSplit stiefel_quotient_split(Index n, Index d) {
  AlgebraSplit s = so_split(n, d);
  s.proj_k = [d](const Mat& x) -> Mat {
    Mat out = Mat::Zero(x.rows(), x.cols());
    const Index m = x.rows() - d;
    out.bottomRightCorner(m, m) = skew(x.bottomRightCorner(m, m));
    return out;
  };
  s.name = "stiefel";
  return s;
}

AlgebraSplit flag_quotient_split(Index n, const std::vector<Index>& d_list) {
  if (d_list.empty()) throw DimensionError("flag_quotient_split: empty block list");
  for (Index di : d_list)
    if (di < 1) throw DimensionError("flag_quotient_split: block sizes must be positive");
  const Index d = std::accumulate(d_list.begin(), d_list.end(), Index{0});
  AlgebraSplit s = so_split(n, d);
  s.proj_k = [d, d_list](const Mat& x) -> Mat {
    Mat out = Mat::Zero(x.rows(), x.cols());
    Index off = 0;
    for (Index di : d_list) {
      out.block(off, off, di, di) = skew(x.block(off, off, di, di));
      off += di;
    }
    const Index m = x.rows() - d;
    out.bottomRightCorner(m, m) = skew(x.bottomRightCorner(m, m));
    return out;
  };
  s.name = "flag";
  return s;
}

QuotientGeometry::QuotientGeometry(GroupGeometry geom) : geom_(std::move(geom)) {
  const AlgebraSplit& s = geom_.split();
  if (!s.has_k()) throw ValidationError("QuotientGeometry: split has no proj_k");
  std::mt19937_64 rng(0xC0FFEE);
  for (int i = 0; i < 4; ++i) {
    const Mat x = randn(rng, s.n), y = randn(rng, s.n);
    const Mat k = s.proj_k(x);
    if (!close(s.proj_k(Mat(x.transpose())), k.transpose(), 1e-10))
      throw ValidationError("QuotientGeometry: k is not transposable");
    const Mat ka = s.proj_a(k);
    if (!close(s.proj_k(ka), ka, 1e-10))
      throw ValidationError("QuotientGeometry: k does not split along a");
    // the rest of k must commute with a
    if (fro(bracket(s.proj_a(y), k - ka)) > 1e-10 * std::max(1.0, fro(y) * fro(k)))
      throw ValidationError("QuotientGeometry: k is not contained in a + a_top");
  }
  simplified_ = check_simplified_condition(geom_);
}

bool check_simplified_condition(const QuotientGeometry& q) { return q.simplified(); }

bool check_simplified_condition(const GroupGeometry& geom) {
  const AlgebraSplit& s = geom.split();
  if (!s.has_k()) return true;
  const double c = 1.0 + geom.params().beta();
  std::mt19937_64 rng(0x51A1);
  bool structural = std::abs(c) <= 1e-12;
  if (!structural) {
    structural = true;
    for (int i = 0; i < 4 && structural; ++i) {
      const Mat x = randn(rng, s.n);
      const Mat v = s.proj_k(s.proj_a(x));
      if (fro(v) > 1e-12 * std::max(1.0, fro(x))) structural = false;
    }
  }
  if (!structural) return false;

  auto pm = [&](const Mat& x) -> Mat { return s.proj_g(x) - s.proj_k(x); };
  for (int i = 0; i < 8; ++i) {
    const double t = (i % 2 == 0) ? 0.3 : 1.1;
    const Mat w = pm(randn(rng, s.n)), a = pm(randn(rng, s.n));
    const Mat u = matrix_exponential(t * c * s.proj_a(a));
    const Mat uinv = matrix_exponential(-t * c * s.proj_a(a));
    const Mat br = bracket(w, a);
    const Mat lhs = s.proj_k(uinv * br * u);
    const Mat rhs = uinv * s.proj_k(br) * u;
    if (fro(lhs - rhs) > 1e-10 * std::max(1.0, fro(br))) return false;
  }
  return true;
}

Mat QuotientGeometry::horizontal_relative(const Mat& x, const Mat& v) const {
  Mat a = geom_.relative(x, v);
  if (fro(proj_k(a)) > kTangentTol * std::max(1.0, fro(a)))
    throw ValidationError("QuotientGeometry: vector is not horizontal");
  return a;
}

Mat QuotientGeometry::horizontal_christoffel(const Mat& x, const Mat& xi, const Mat& eta) const {
  const Mat a = horizontal_relative(x, xi), b = horizontal_relative(x, eta);
  return geom_.christoffel(x, xi, eta) - 0.5 * x * proj_k(bracket(a, b));
}

Mat QuotientGeometry::geodesic(const Mat& x, const Mat& xi, double t) const {
  horizontal_relative(x, xi);
  return geom_.geodesic(x, xi, t);
}

LinearOperator QuotientGeometry::transport_operator(const Mat& a) const {
  const AlgebraSplit& s = geom_.split();
  if (a.rows() != s.n || a.cols() != s.n) throw DimensionError("transport_operator: bad shape");
  const double c = 1.0 + geom_.params().beta();
  const Mat aa = s.proj_a(a), at = a.transpose(), aat = aa.transpose();
  MatrixMap pa = s.proj_a, pg = s.proj_g, pk = s.proj_k;
  auto pm = [pg, pk](const Mat& x) -> Mat { return pg(x) - pk(x); };

  LinearOperator op;
  op.rows = op.cols = s.n;
  op.apply = [a, aa, c, pa, pm](const Mat& b) -> Mat {
    Mat out = pm(bracket(b, a));
    if (c != 0.0) out += c * (bracket(aa, b) - bracket(pa(b), a));
    return 0.5 * out;
  };
  op.apply_adjoint = [at, aat, c, pa, pm](const Mat& b) -> Mat {
    Mat out = bracket(pm(b), at);
    if (c != 0.0) out += c * (bracket(aat, b) - pa(bracket(b, at)));
    return 0.5 * out;
  };
  if (s.n <= kExhaustiveNormMaxN) {
    op.one_norm_bound = one_norm_exhaustive(op);
  } else {
    // ||p_m|| <= ||p_g|| + ||p_k|| <= 2 for the mask-type projections used here
    const double m = bracket_norm(a);
    op.one_norm_bound =
        0.5 * (2.0 * m + std::abs(c) * (bracket_norm(aa) + s.proj_a_one_norm * m));
  }
  return op;
}

Mat QuotientGeometry::w_rhs(const Mat& a, double t, const Mat& w) const {
  const AlgebraSplit& s = geom_.split();
  const double c = 1.0 + geom_.params().beta();
  const Mat aa = s.proj_a(a);
  const Mat br = bracket(w, a);
  Mat vertical;
  if (c == 0.0) {
    vertical = s.proj_k(br);
  } else {
    const Mat u = matrix_exponential(t * c * aa), uinv = matrix_exponential(-t * c * aa);
    vertical = u * s.proj_k(uinv * br * u) * uinv;
  }
  Mat out = br - vertical;
  if (c != 0.0) out += c * (bracket(aa, w) - bracket(s.proj_a(w), a));
  return 0.5 * out;
}

Mat QuotientGeometry::transport_ode(const Mat& x, const Mat& xi, const Mat& eta, double t,
                                    const OdeOptions& ode_options) const {
  const Mat a = horizontal_relative(x, xi), b = horizontal_relative(x, eta);
  if (t == 0.0) return eta;
  MatrixRhs rhs = [this, &a](double s, const Mat& w) { return w_rhs(a, s, w); };
  const Mat w = integrate_matrix_ode(rhs, b, 0.0, {t}, ode_options).back();
  const auto p = geom_.path(x, xi);
  return x * matrix_exponential(t * p.a_first) * w * matrix_exponential(t * p.a_second);
}

Mat QuotientGeometry::transport(const Mat& x, const Mat& xi, const Mat& eta, double t,
                                const ExpaOptions& expa_options,
                                const OdeOptions& ode_options) const {
  if (!simplified_) return transport_ode(x, xi, eta, t, ode_options);
  const Mat a = horizontal_relative(x, xi), b = horizontal_relative(x, eta);
  if (t == 0.0) return eta;
  const Mat w = expa(transport_operator(a), b, t, expa_options);
  const auto p = geom_.path(x, xi);
  return x * matrix_exponential(t * p.a_first) * w * matrix_exponential(t * p.a_second);
}

}  // namespace manitrans
