#include "manitrans/forms.hpp"
#include "manitrans/errors.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace manitrans {

namespace {

Vec vec_of(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

Mat unvec(const Vec& v, Index n) { return Eigen::Map<const Mat>(v.data(), n, n); }

Mat stack_columns(const std::vector<Mat>& mats, Index n) {
  Mat out(n * n, static_cast<Index>(mats.size()));
  for (std::size_t j = 0; j < mats.size(); ++j) out.col(static_cast<Index>(j)) = vec_of(mats[j]);
  return out;
}

// Orthonormal basis (as columns) of the column span of m.
Mat orthonormal_span(const Mat& m, double rank_tol) {
  if (m.cols() == 0 || m.rows() == 0) return Mat(m.rows(), 0);
  Eigen::ColPivHouseholderQR<Mat> qr(m);
  qr.setThreshold(rank_tol);
  const Index r = qr.rank();
  Mat q = qr.householderQ() * Mat::Identity(m.rows(), r);
  return q;
}

MatrixMap span_projector(Mat basis, const MatrixMap& pre, Index n) {
  return [basis = std::move(basis), pre, n](const Mat& x) -> Mat {
    if (basis.cols() == 0) return Mat::Zero(n, n);
    Vec v = vec_of(pre(x));
    Vec p = basis * (basis.transpose() * v);
    return unvec(p, n);
  };
}

Mat top_block_only(const Mat& m, Index k) {
  Mat out = Mat::Zero(m.rows(), m.cols());
  out.topLeftCorner(k, k) = m.topLeftCorner(k, k);
  return out;
}

void require_algebra_shape(const Mat& m, const AlgebraSplit& split, std::string_view what) {
  if (m.rows() != split.n || m.cols() != split.n) {
    std::ostringstream os;
    os << what << ": expected " << split.n << "x" << split.n << ", got " << m.rows() << "x"
       << m.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

MetricParams::MetricParams(double beta0, double beta1) : beta0_(beta0), beta1_(beta1) {
  if (!std::isfinite(beta0) || !std::isfinite(beta1))
    throw ValidationError("MetricParams: parameters must be finite");
  if (beta0 == 0.0 || beta1 == 0.0)
    throw ValidationError("MetricParams: beta0 and beta1 must be nonzero");
}

AlgebraSplit gl_split(Index n) {
  if (n < 1) throw DimensionError("gl_split: n must be positive");
  AlgebraSplit s;
  s.n = n;
  s.proj_g = [](const Mat& x) -> Mat { return x; };
  s.proj_a = [](const Mat& x) -> Mat { return skew(x); };
  s.eigenspace_dims = EigenspaceDims{n * (n + 1) / 2, 0, 0, n * (n - 1) / 2};
  s.name = "gl";
  return s;
}

AlgebraSplit so_split(Index n, Index d) {
  if (d < 1 || d >= n) throw DimensionError("so_split: need 1 <= d < n");
  AlgebraSplit s;
  s.n = n;
  s.proj_g = [](const Mat& x) -> Mat { return skew(x); };
  s.proj_a = [d](const Mat& x) -> Mat {
    Mat out = Mat::Zero(x.rows(), x.cols());
    out.topLeftCorner(d, d) = skew(x.topLeftCorner(d, d));
    return out;
  };
  const Index all = n * (n - 1) / 2, a = d * (d - 1) / 2;
  s.eigenspace_dims = EigenspaceDims{0, all - a, 0, a};
  s.name = "so";
  return s;
}

AlgebraSplit block_split(Index n, Index k) {
  if (k < 1 || k > n) throw DimensionError("block_split: need 1 <= k <= n");
  AlgebraSplit s;
  s.n = n;
  s.proj_g = [](const Mat& x) -> Mat { return x; };
  s.proj_a = [k](const Mat& x) -> Mat { return top_block_only(x, k); };
  s.eigenspace_dims = EigenspaceDims{n * (n + 1) / 2 - k * (k + 1) / 2,
                                     n * (n - 1) / 2 - k * (k - 1) / 2, k * (k + 1) / 2,
                                     k * (k - 1) / 2};
  s.name = "block";
  return s;
}

AlgebraSplit with_subalgebra(const AlgebraSplit& split, MatrixMap proj_a, std::string name) {
  AlgebraSplit s = split;
  s.proj_a = std::move(proj_a);
  s.eigenspace_dims.reset();
  s.name = std::move(name);
  return s;
}

bool in_subspace(const MatrixMap& proj, const Mat& w, double tol) {
  return fro(w - proj(w)) <= tol * std::max(1.0, fro(w));
}

void validate_split(const AlgebraSplit& split, int probes, double tol) {
  if (!split.proj_g || !split.proj_a) throw ValidationError("validate_split: missing projection");
  const Index n = split.n;
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  auto randn = [&] { return Mat(Mat::NullaryExpr(n, n, [&] { return gauss(rng); })); };

  auto fail = [&](const char* what) {
    throw ValidationError(std::string("validate_split(") + split.name + "): " + what);
  };
  auto close = [&](const Mat& a, const Mat& b) {
    return fro(a - b) <= tol * std::max(1.0, fro(a) + fro(b));
  };

  auto check_projection = [&](const MatrixMap& p, const char* label) {
    for (int i = 0; i < probes; ++i) {
      Mat x = randn(), y = randn();
      Mat px = p(x);
      if (!close(p(px), px)) fail((std::string(label) + " is not idempotent").c_str());
      if (!close(p(Mat(x.transpose())), px.transpose()))
        fail((std::string(label) + " does not commute with transpose").c_str());
      if (!close(p(split.proj_g(x)), px))
        fail((std::string(label) + " is not contained in g").c_str());
      Mat br = bracket(px, p(y));
      if (!close(p(br), br)) fail((std::string(label) + " is not closed under brackets").c_str());
    }
  };
  check_projection(split.proj_g, "proj_g");
  check_projection(split.proj_a, "proj_a");
  if (split.has_k()) check_projection(split.proj_k, "proj_k");
}

double trace_form(const Mat& a, const Mat& b) {
  detail::require_square(a, "trace_form");
  detail::require_same_shape(a, b, "trace_form");
  // Tr(ab) = sum_ij a_ij b_ji
  return (a.array() * b.transpose().array()).sum();
}

double frobenius_form(const Mat& a, const Mat& b) {
  detail::require_same_shape(a, b, "frobenius_form");
  return (a.array() * b.array()).sum();
}

double beta_form_unchecked(const Mat& g, const Mat& h, const AlgebraSplit& split,
                           const MetricParams& params) {
  const Mat ga = split.proj_a(g), ha = split.proj_a(h);
  const double taa = (ha.array() * ga.transpose().array()).sum();
  const double tall = (h.array() * g.transpose().array()).sum();
  return params.beta0() * (tall - taa) - params.beta1() * taa;
}

double beta_form(const Mat& g, const Mat& h, const AlgebraSplit& split,
                 const MetricParams& params) {
  require_algebra_shape(g, split, "beta_form");
  require_algebra_shape(h, split, "beta_form");
  if (!in_subspace(split.proj_g, g) || !in_subspace(split.proj_g, h))
    throw ValidationError("beta_form: arguments must lie in the Lie algebra");
  return beta_form_unchecked(g, h, split, params);
}

Mat gram_projection(const std::vector<Mat>& basis, const Mat& w, const BilinearForm& form) {
  if (basis.empty()) return Mat::Zero(w.rows(), w.cols());
  const Index k = static_cast<Index>(basis.size());
  Mat c(k, k);
  Vec rhs(k);
  for (Index i = 0; i < k; ++i) {
    detail::require_same_shape(basis[i], w, "gram_projection");
    for (Index j = 0; j < k; ++j) c(i, j) = form(basis[i], basis[j]);
    rhs(i) = form(basis[i], w);
  }
  Eigen::FullPivLU<Mat> lu(c);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible())
    throw DegenerateSubspaceError("gram_projection: Gram matrix is singular on this subspace");
  Vec coef = lu.solve(rhs);
  Mat out = Mat::Zero(w.rows(), w.cols());
  for (Index i = 0; i < k; ++i) out += coef(i) * basis[i];
  return out;
}

std::vector<Mat> range_basis(const MatrixMap& proj, Index n, double rank_tol) {
  Mat images(n * n, n * n);
  Mat e = Mat::Zero(n, n);
  for (Index j = 0; j < n * n; ++j) {
    e(j) = 1.0;
    images.col(j) = vec_of(proj(e));
    e(j) = 0.0;
  }
  Mat q = orthonormal_span(images, rank_tol);
  std::vector<Mat> out;
  out.reserve(static_cast<std::size_t>(q.cols()));
  for (Index j = 0; j < q.cols(); ++j) out.push_back(unvec(q.col(j), n));
  return out;
}

SplitComponents derive_split_components(const AlgebraSplit& split, Index max_n) {
  const Index n = split.n;
  if (n > max_n) {
    std::ostringstream os;
    os << "derive_split_components: n = " << n << " exceeds the dense cap " << max_n;
    throw CapacityError(os.str());
  }
  MatrixMap pg = split.proj_g, pa = split.proj_a;
  MatrixMap perp = [pg, pa](const Mat& x) -> Mat { return pg(x) - pa(x); };

  const auto g_basis = range_basis(pg, n);
  const auto a_basis = range_basis(pa, n);
  const auto perp_basis = range_basis(perp, n);

  // a_join = span [a_i, b_j]
  std::vector<Mat> brackets;
  brackets.reserve(a_basis.size() * perp_basis.size());
  for (const auto& a : a_basis)
    for (const auto& b : perp_basis) brackets.push_back(bracket(a, b));
  Mat join = orthonormal_span(stack_columns(brackets, n), 1e-10);

  // a_top = {c in a_perp : [a_i, c] = 0 for all i}
  const Index q = static_cast<Index>(perp_basis.size());
  Mat top(n * n, 0);
  if (q > 0) {
    const Index p = static_cast<Index>(a_basis.size());
    Mat ad(std::max<Index>(p, 1) * n * n, q);
    ad.setZero();
    for (Index j = 0; j < q; ++j)
      for (Index i = 0; i < p; ++i)
        ad.block(i * n * n, j, n * n, 1) = vec_of(bracket(a_basis[i], perp_basis[j]));
    Eigen::BDCSVD<Mat> svd(ad, Eigen::ComputeFullV);
    const Vec& sv = svd.singularValues();
    const double cut = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    Mat null = svd.matrixV().rightCols(q - rank);
    Mat pb = stack_columns(perp_basis, n);
    top = pb * null;
  }

  SplitComponents c;
  c.proj_a_perp = perp;
  c.proj_a_join = span_projector(join, perp, n);
  c.proj_a_top = span_projector(top, perp, n);
  c.dim_g = static_cast<Index>(g_basis.size());
  c.dim_a = static_cast<Index>(a_basis.size());
  c.dim_join = join.cols();
  c.dim_top = top.cols();
  return c;
}

SignatureSummary classify_metric_signature(const AlgebraSplit& split, const MetricParams& params,
                                           Index max_numeric_n) {
  EigenspaceDims dims;
  if (split.eigenspace_dims) {
    dims = *split.eigenspace_dims;
  } else {
    if (split.n > max_numeric_n) {
      std::ostringstream os;
      os << "classify_metric_signature: split '" << split.name
         << "' has no dimension metadata and n = " << split.n << " exceeds " << max_numeric_n;
      throw CapacityError(os.str());
    }
    MatrixMap pg = split.proj_g, pa = split.proj_a;
    auto count = [&](auto f) { return static_cast<Index>(range_basis(f, split.n).size()); };
    dims.a_sym = count([pa](const Mat& x) -> Mat { return sym(pa(x)); });
    dims.a_skew = count([pa](const Mat& x) -> Mat { return skew(pa(x)); });
    dims.perp_sym = count([pg, pa](const Mat& x) -> Mat { return sym(pg(x) - pa(x)); });
    dims.perp_skew = count([pg, pa](const Mat& x) -> Mat { return skew(pg(x) - pa(x)); });
  }
  const double b0 = params.beta0(), b1 = params.beta1();
  SignatureSummary s;
  s.blocks = {{{"a_perp_sym", b0, dims.perp_sym},
               {"a_perp_skew", -b0, dims.perp_skew},
               {"a_sym", -b1, dims.a_sym},
               {"a_skew", b1, dims.a_skew}}};
  bool positive = true;
  for (const auto& b : s.blocks)
    if (b.dim > 0 && !(b.eigenvalue > 0.0)) positive = false;
  s.kind = positive ? Signature::riemannian : Signature::pseudo_riemannian;
  return s;
}

}  // namespace manitrans
