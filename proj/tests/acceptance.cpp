// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "test_support.hpp"

#include "manitrans/bench.hpp"
#include "manitrans/errors.hpp"
#include "manitrans/flag_grassmann.hpp"
#include "manitrans/gl_so.hpp"
#include "manitrans/group_core.hpp"
#include "manitrans/oracle.hpp"
#include "manitrans/quotient.hpp"
#include "manitrans/stiefel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

using namespace manitrans;
using mt_test::rel_err;

namespace {

using clk = std::chrono::steady_clock;

double seconds_since(clk::time_point t0) {
  return std::chrono::duration<double>(clk::now() - t0).count();
}

bool report(int id, bool ok, const std::string& summary) {
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", summary.c_str());
  std::fflush(stdout);
  return ok;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// running max that also remembers whether anything was NaN
struct Worst {
  double v = 0.0;
  bool nan = false;
  void add(double x) {
    if (std::isnan(x)) nan = true;
    v = std::max(v, x);
  }
  bool le(double tol) const { return !nan && v <= tol; }
};

Mat stiefel_point_perp(const Mat& y, Index n) {
  Mat x(n, n);
  x << y, complete_orthonormal(y);
  return x;
}

// ---------------------------------------------------------------- 1

bool criterion1() {
  const auto t0 = clk::now();
  std::vector<double> grid;
  for (int i = 0; i <= 8; ++i) grid.push_back(0.25 * i);

  struct Cfg {
    Manifold m;
    Index n, d;
    double alpha, beta;
    std::vector<Index> dl;
  };
  const std::vector<Cfg> cfgs{{Manifold::stiefel, 8, 3, 0.5, 0.7, {}},
                              {Manifold::stiefel, 8, 3, 1.0, 0.7, {}},
                              {Manifold::so, 6, 2, 0.8, 0.7, {}},
                              {Manifold::gl, 4, 4, 0.5, 0.7, {}},
                              {Manifold::flag, 6, 4, 0.5, 0.7, {2, 2}}};
  Worst err, res;
  bool all = true;
  for (const auto& c : cfgs) {
    BenchConfig bc;
    bc.manifold = c.m;
    bc.n = c.n;
    bc.d = c.d;
    bc.alpha = c.alpha;
    bc.beta = c.beta;
    bc.d_list = c.dl;
    bc.t_grid = grid;
    Worst e1, r1;
    for (const auto& row : run_verify(bc)) {
      e1.add(row.oracle_error);
      r1.add(row.transport_residual);
      all = all && row.pass;
    }
    std::printf("  %-9s n=%-2ld d=%ld param=%-4g  oracle %.2e  residual %.2e\n", manifold_name(c.m),
                static_cast<long>(c.n), static_cast<long>(c.d), metric_parameter(bc), e1.v, r1.v);
    err.add(e1.v);
    res.add(r1.v);
  }
  const double secs = seconds_since(t0);
  const bool ok = all && err.le(1e-6) && res.le(1e-5) && secs < 30.0;
  return report(1, ok, fmt("transport vs ODE oracle max %.2e (<= 1e-6), residual max %.2e (<= 1e-5), %.1f s (< 30)",
                           err.v, res.v, secs));
}

// ---------------------------------------------------------------- 2

bool criterion2() {
  const auto t0 = clk::now();
  const std::vector<double> grid{0.1, 0.3, 0.5, 0.7, 1.2, 1.5, 1.7, 2.1, 3.0, 15.0};
  Worst drift;

  BenchConfig st;
  st.manifold = Manifold::stiefel;
  st.n = 2000;
  st.d = 100;
  st.alpha = 1.0;
  st.t_grid = grid;
  st.num_vectors = 20;
  Worst ds;
  for (const auto& r : run_isometry(st)) ds.add(r.max_gram_drift);
  std::printf("  St(2000,100) alpha=1       max drift %.2e  (%.1f s)\n", ds.v, seconds_since(t0));

  BenchConfig fl;
  fl.manifold = Manifold::flag;
  fl.n = 2000;
  fl.d_list = {50, 20, 30};
  fl.alpha = 0.5;
  fl.t_grid = grid;
  fl.num_vectors = 20;
  Worst df;
  for (const auto& r : run_isometry(fl)) df.add(r.max_gram_drift);
  std::printf("  Flag(50,20,30,1900) alpha=1/2 max drift %.2e  (%.1f s)\n", df.v, seconds_since(t0));

  drift.add(ds.v);
  drift.add(df.v);
  if (ds.nan || df.nan) drift.nan = true;
  const double secs = seconds_since(t0);
  return report(2, drift.le(1e-9) && secs < 180.0,
                fmt("max Gram drift %.2e (<= 1e-9), %.1f s (< 180)", drift.v, secs));
}

// ---------------------------------------------------------------- 3

bool criterion3() {
  const auto t0 = clk::now();
  const std::vector<double> tgrid{0.5, 1.0, 2.0, 5.0, 20.0};
  BenchConfig c;
  c.manifold = Manifold::stiefel;
  c.d = 50;
  c.alpha = 0.5;
  c.repeats = 5;
  c.t_grid = tgrid;

  // time per n summed over the t grid
  std::vector<double> ns, by_n;
  std::vector<TimingRow> at_2000;
  for (Index n : {100, 200, 1000, 2000}) {
    c.n = n;
    auto rows = run_timing(c);
    double total = 0.0;
    for (const auto& r : rows) total += r.median_seconds;
    ns.push_back(static_cast<double>(n));
    by_n.push_back(total);
    std::printf("  n=%-5ld d=50  total over t grid %.4f s\n", static_cast<long>(n), total);
    if (n == 2000) at_2000 = rows;
  }
  std::vector<double> ts, by_t;
  for (const auto& r : at_2000) {
    ts.push_back(r.t);
    by_t.push_back(r.median_seconds);
    std::printf("  n=2000 t=%-4g %.4f s\n", r.t, r.median_seconds);
  }
  const double sn = loglog_slope(ns, by_n), st = loglog_slope(ts, by_t);
  const double secs = seconds_since(t0);
  return report(3, sn <= 1.3 && st <= 1.3 && secs < 300.0,
                fmt("log-log slope in n %.3f, in t %.3f (both <= 1.3), %.1f s (< 300)", sn, st, secs));
}

// ---------------------------------------------------------------- 4

bool criterion4() {
  const auto t0 = clk::now();
  Rng rng(4004);
  long cases = 0, proof_bad = 0, display_bad = 0;
  double proof_ratio = 0.0, display_ratio = 0.0, worst_display = 0.0;
  std::string first_display;
  long proof_tighter = 0, regrouped_bad = 0;
  for (Index d = 1; d <= 4; ++d)
    for (Index k = 1; k <= 4; ++k)
      for (double alpha : {0.25, 0.5, 1.0, 2.0})
        for (int s = 0; s < 50; ++s) {
          const auto dec = mt_test::random_decomposition(rng, d, k);
          const auto op = p_bal_operator(dec, alpha);
          const double exact = one_norm_exhaustive(op);
          const double proof = p_bal_norm_bound(dec, alpha);
          const double display = p_bal_norm_bound_display(dec, alpha);
          const double slack = 1e-12 * std::max(1.0, exact);
          ++cases;
          if (exact > proof + slack) ++proof_bad;
          if (exact > display + slack) {
            if (display_bad == 0)
              first_display = fmt("d=%ld k=%ld alpha=%g exact %.4f display %.4f", static_cast<long>(d),
                                  static_cast<long>(k), alpha, exact, display);
            ++display_bad;
            worst_display = std::max(worst_display, exact / display);
          }
          if (proof < display) ++proof_tighter;
          // diagnostic: the same display with alpha^(1/2)|R|_inf pulled out of the column sum
          const double sa = std::sqrt(alpha);
          const double a1 = norm1(dec.a), r1 = norm1(dec.r), rinf = norm_inf(dec.r);
          const double regrouped = std::max(sa * (r1 + static_cast<double>(d) * std::abs(4 * alpha - 1) * a1),
                                            alpha * a1 + sa * rinf);
          if (exact > regrouped + slack) ++regrouped_bad;
          if (exact > 0) {
            proof_ratio += proof / exact;
            display_ratio += display / exact;
          }
        }
  std::printf("  %ld cases; mean bound/exact: proof-derived %.3f, displayed %.3f; proof-derived tighter in %ld\n",
              cases, proof_ratio / cases, display_ratio / cases, proof_tighter);
  std::printf("  violations: proof-derived %ld, displayed %ld", proof_bad, display_bad);
  if (display_bad) std::printf(" (worst exact/display %.3f; first: %s)", worst_display, first_display.c_str());
  std::printf("\n  displayed n_R regrouped as alpha*sum|a_ij| + alpha^(1/2)|R|_inf (not asserted): %ld violations\n",
              regrouped_bad);
  const double secs = seconds_since(t0);
  return report(4, proof_bad == 0 && display_bad == 0 && secs < 20.0,
                fmt("violations: proof-derived bound %ld, displayed max(n_A, n_R) %ld (need 0 each), %.1f s (< 20)",
                    proof_bad, display_bad, secs));
}

// ---------------------------------------------------------------- 5

bool criterion5() {
  Rng rng(5005);
  Worst pair;
  const std::vector<GroupGeometry> geoms{GroupGeometry(gl_split(4), MetricParams(1.0, 0.7)),
                                         GroupGeometry(so_split(5, 2), MetricParams(-0.5, 0.8))};
  for (const auto& g : geoms) {
    const auto& pg = g.split().proj_g;
    const Index n = g.n();
    for (int i = 0; i < 1000; ++i) {
      const Mat a = pg(random_normal(rng, n, n));
      const Mat b = pg(random_normal(rng, n, n)), c = pg(random_normal(rng, n, n));
      const auto op = g.transport_operator(a);
      const double s = beta_form(op.apply(b), c, g.split(), g.params()) +
                       beta_form(b, op.apply(c), g.split(), g.params());
      pair.add(std::abs(s));
    }
  }

  Worst bal;
  for (Index d = 1; d <= 4; ++d)
    for (Index k = 0; k <= 4; ++k)
      for (double alpha : {0.25, 0.5, 1.0, 2.0})
        for (int i = 0; i < 10; ++i) {
          const auto dec = mt_test::random_decomposition(rng, d, k);
          const auto op = p_bal_operator(dec, alpha);
          const Mat w = random_normal(rng, d + k, d), v = random_normal(rng, d + k, d);
          const double s = (op.apply(skew_top(w, d)).array() * v.array()).sum() +
                           (w.array() * op.apply(skew_top(v, d)).array()).sum();
          bal.add(std::abs(s));
        }

  Worst adj;
  auto adj_check = [&](const LinearOperator& op) {
    const Mat fwd = mt_test::dense_of(op);
    LinearOperator t = op;
    t.apply = op.apply_adjoint;
    adj.add((mt_test::dense_of(t) - fwd.transpose()).cwiseAbs().maxCoeff());
  };
  for (int i = 0; i < 5; ++i) {
    adj_check(geoms[0].transport_operator(random_normal(rng, 4, 4)));
    GroupGeometry gl5(gl_split(5), MetricParams(1.0, 1.7));
    adj_check(gl5.transport_operator(random_normal(rng, 5, 5)));
    SOGeometry so5(5, 2, 0.8);
    adj_check(so5.transport_operator(random_skew(rng, 5)));
  }
  std::printf("  beta-pairing max %.2e, balanced Frobenius pairing max %.2e, adjoint vs transpose max %.2e\n",
              pair.v, bal.v, adj.v);
  return report(5, pair.le(1e-10) && bal.le(1e-12) && adj.le(1e-10),
                fmt("pairing %.1e (<= 1e-10), balanced %.1e (<= 1e-12), adjoint %.1e (<= 1e-10)", pair.v,
                    bal.v, adj.v));
}

// ---------------------------------------------------------------- 6

bool criterion6() {
  Rng rng(6006);

  // (a) trace-form metric
  Worst ea;
  for (Index n : {2, 3, 5}) {
    GLGeometry fast(n, -1.0);
    const auto& gen = fast.group();
    const Mat x = random_gl_plus(rng, n), xi = random_normal(rng, n, n), eta = random_normal(rng, n, n);
    const Mat xinv = x.inverse(), a = xinv * xi;
    const double t = 0.9;
    const Mat half = (0.5 * t * a).exp();
    const Mat geo = x * (t * a).exp();
    const Mat tr = x * half * xinv * eta * half;
    const Mat chr = -0.5 * (xi * xinv * eta + eta * xinv * xi);
    ea.add(rel_err(gen.geodesic(x, xi, t), geo));
    ea.add(rel_err(gen.transport(x, xi, eta, t), tr));
    ea.add(rel_err(gen.christoffel(x, xi, eta), chr));
    ea.add(rel_err(fast.geodesic(x, xi, t), geo));
    ea.add(rel_err(fast.transport(x, xi, eta, t), tr));
  }

  // (b) specialised paths
  Worst eb;
  for (double beta : {0.3, 0.7, 2.0}) {
    GLGeometry g(4, beta);
    const Mat x = random_gl_plus(rng, 4), xi = random_normal(rng, 4, 4), eta = random_normal(rng, 4, 4);
    eb.add(rel_err(g.geodesic(x, xi, 1.1), g.group().geodesic(x, xi, 1.1)));
    eb.add(rel_err(g.geodesic_velocity(x, xi, 1.1), g.group().geodesic_velocity(x, xi, 1.1)));
    eb.add(rel_err(g.christoffel(x, xi, eta), g.group().christoffel(x, xi, eta)));
    eb.add(rel_err(g.transport(x, xi, eta, 1.1), g.group().transport(x, xi, eta, 1.1)));
  }
  for (double alpha : {0.5, 0.8, 1.5}) {
    SOGeometry g(6, 2, alpha);
    const Mat x = random_special_orthogonal(rng, 6);
    const Mat xi = x * random_skew(rng, 6), eta = x * random_skew(rng, 6);
    eb.add(rel_err(g.geodesic(x, xi, 1.1), g.group().geodesic(x, xi, 1.1)));
    eb.add(rel_err(g.geodesic_velocity(x, xi, 1.1), g.group().geodesic_velocity(x, xi, 1.1)));
    eb.add(rel_err(g.christoffel(x, xi, eta), g.group().christoffel(x, xi, eta)));
    eb.add(rel_err(g.transport(x, xi, eta, 1.1), g.group().transport(x, xi, eta, 1.1)));
  }

  // (c) Stiefel through the quotient of SO(n)
  Worst ec;
  for (Index n : {5, 8, 12})
    for (double alpha : {0.5, 0.8, 1.0, 2.0}) {
      const Index d = n / 3 + 1;
      QuotientGeometry q(GroupGeometry(stiefel_quotient_split(n, d), MetricParams(-0.5, alpha)));
      const Mat y = random_stiefel(rng, n, d);
      const Mat x = stiefel_point_perp(y, n), yp = x.rightCols(n - d);
      const Mat xi = mt_test::stiefel_tangent(rng, y), eta = mt_test::stiefel_tangent(rng, y);
      const Mat lxi = horizontal_lift(y, yp, xi), leta = horizontal_lift(y, yp, eta);
      ec.add((q.transport(x, lxi, leta, 1.3).leftCols(d) - stiefel_transport(y, xi, eta, alpha, 1.3)).norm());
    }

  // (d) Grassmann three ways
  Worst ed;
  for (Index n : {6, 9}) {
    const Index d = n / 3;
    const Mat y = random_stiefel(rng, n, d);
    auto hor = [&] {
      Mat v = random_normal(rng, n, d);
      return Mat(v - y * (y.transpose() * v));
    };
    const Mat xi = hor(), eta = hor();
    FlagSignature one({d}, n);
    QuotientGeometry q(GroupGeometry(flag_quotient_split(n, {d}), MetricParams(-0.5, 0.5)));
    const Mat x = stiefel_point_perp(y, n), yp = x.rightCols(n - d);
    const Mat lxi = horizontal_lift(y, yp, xi), leta = horizontal_lift(y, yp, eta);
    for (double t : {0.4, 1.7}) {
      const Mat g = grassmann_transport(y, xi, eta, t);
      ed.add(rel_err(g, flag_transport_canonical(one, y, xi, eta, t)));
      ed.add(rel_err(g, q.transport(x, lxi, leta, t).leftCols(d)));
    }
  }

  // (e) exponential action against a dense expm of the vectorized operator
  Worst ee;
  ExpaOptions taylor;
  taylor.allow_dense_fallback = false;
  auto expa_check = [&](const LinearOperator& op, double t) {
    const Mat b = random_normal(rng, op.rows, op.cols);
    ee.add(rel_err(expa(op, b, t, taylor), mt_test::dense_expa(op, b, t)));
  };
  for (double t : {0.3, 2.0, 9.0}) {
    GroupGeometry gl3(gl_split(3), MetricParams(1.0, 0.7));
    expa_check(gl3.transport_operator(random_normal(rng, 3, 3)), t);
    SOGeometry so3(3, 1, 0.8);
    expa_check(so3.transport_operator(random_skew(rng, 3)), t);
    for (Index d = 1; d <= 3; ++d)
      for (Index k = 0; k + d <= 4 && (d + k) * d <= 12; ++k)
        expa_check(p_bal_operator(mt_test::random_decomposition(rng, d, k), 0.8), t);
    const Mat m = random_normal(rng, 12, 12);
    LinearOperator dense;
    dense.rows = 12;
    dense.cols = 1;
    dense.apply = [m](const Mat& w) -> Mat { return m * w; };
    dense.apply_adjoint = [m](const Mat& w) -> Mat { return m.transpose() * w; };
    dense.one_norm_bound = m.cwiseAbs().colwise().sum().maxCoeff();
    expa_check(dense, t);
  }

  std::printf("  (a) trace form %.1e  (b) fast paths %.1e  (c) Stiefel/quotient %.1e  (d) Grassmann %.1e  (e) expa %.1e\n",
              ea.v, eb.v, ec.v, ed.v, ee.v);
  const bool ok = ea.le(1e-10) && eb.le(1e-10) && ec.le(1e-8) && ed.le(1e-10) && ee.le(1e-10);
  return report(6, ok, fmt("a %.1e b %.1e (<= 1e-10), c %.1e (<= 1e-8), d %.1e e %.1e (<= 1e-10)", ea.v, eb.v,
                           ec.v, ed.v, ee.v));
}

// ---------------------------------------------------------------- 7

struct GeoCase {
  std::string name;
  Mat x, xi;
  std::function<Mat(double)> gamma;
  ChristoffelFn chr;
  bool orthonormal;
};

bool criterion7() {
  Rng rng(7007);
  std::vector<GeoCase> cases;

  for (double alpha : {0.5, 1.0, 2.0}) {
    const Mat y = random_stiefel(rng, 8, 3), xi = mt_test::stiefel_tangent(rng, y);
    cases.push_back({fmt("stiefel alpha=%g", alpha), y, xi,
                     [=](double t) { return stiefel_geodesic(y, xi, alpha, t); },
                     [=](const Mat& p, const Mat& u, const Mat& v) { return stiefel_christoffel(p, u, v, alpha); },
                     true});
  }
  {
    auto g = std::make_shared<SOGeometry>(6, 2, 0.8);
    const Mat x = random_special_orthogonal(rng, 6), xi = x * random_skew(rng, 6);
    cases.push_back({"so(6) alpha=0.8", x, xi, [=](double t) { return g->geodesic(x, xi, t); },
                     [=](const Mat& p, const Mat& u, const Mat& v) {
                       return g->christoffel(p, p * skew(p.transpose() * u), p * skew(p.transpose() * v));
                     },
                     true});
  }
  {
    auto g = std::make_shared<GLGeometry>(4, 0.7);
    const Mat x = random_gl_plus(rng, 4), xi = random_normal(rng, 4, 4);
    cases.push_back({"gl(4) beta=0.7", x, xi, [=](double t) { return g->geodesic(x, xi, t); },
                     [=](const Mat& p, const Mat& u, const Mat& v) { return g->christoffel(p, u, v); }, false});
  }
  {
    FlagSignature sig({2, 2}, 7);
    const Mat y = random_stiefel(rng, 7, 4);
    const Mat xi = flag_horizontal_project(sig, y, random_normal(rng, 7, 4));
    cases.push_back({"flag(2,2;7)", y, xi, [=](double t) { return flag_geodesic(sig, y, xi, 0.5, t); },
                     [=](const Mat& p, const Mat& u, const Mat& v) { return flag_christoffel(sig, p, u, v, 0.5); },
                     true});
  }
  {
    const Mat y = random_stiefel(rng, 8, 3);
    Mat xi = random_normal(rng, 8, 3);
    xi -= y * (y.transpose() * xi);
    FlagSignature one({3}, 8);
    cases.push_back({"grassmann(3;8)", y, xi, [=](double t) { return grassmann_geodesic(y, xi, t); },
                     [=](const Mat& p, const Mat& u, const Mat& v) { return flag_christoffel(one, p, u, v, 0.5); },
                     true});
  }

  bool exact = true;
  Worst fd, orth, res;
  for (const auto& c : cases) {
    exact = exact && (c.gamma(0.0) == c.x);
    const double h = 1e-5;
    const double e_fd = ((c.gamma(h) - c.gamma(-h)) / (2 * h) - c.xi).norm() / std::max(1.0, c.xi.norm());
    double e_orth = 0.0;
    if (c.orthonormal)
      for (double t : {0.7, 2.5}) {
        const Mat g = c.gamma(t);
        e_orth = std::max(e_orth, (g.transpose() * g - Mat::Identity(g.cols(), g.cols())).norm());
      }
    std::vector<Mat> samples;
    const double dt = 1e-4;
    for (int i = 0; i < 5; ++i) samples.push_back(c.gamma(0.6 + i * dt));
    const double e_res = geodesic_residual(samples, c.chr, dt);
    std::printf("  %-18s fd %.1e  orthonormality %.1e  residual %.1e\n", c.name.c_str(), e_fd, e_orth, e_res);
    fd.add(e_fd);
    orth.add(e_orth);
    res.add(e_res);
  }
  return report(7, exact && fd.le(1e-6) && orth.le(1e-10) && res.le(1e-6),
                fmt("gamma(0) exact %s, velocity fd %.1e (<= 1e-6), orthonormality %.1e (<= 1e-10), residual %.1e (<= 1e-6)",
                    exact ? "yes" : "no", fd.v, orth.v, res.v));
}

}  // namespace

int main() {
  bool ok = true;
  std::vector<std::function<bool()>> all{criterion1, criterion2, criterion3, criterion4,
                                         criterion5, criterion6, criterion7};
  for (std::size_t i = 0; i < all.size(); ++i) {
    try {
      ok = all[i]() && ok;
    } catch (const std::exception& e) {
      ok = report(static_cast<int>(i + 1), false, std::string("threw: ") + e.what()) && ok;
    }
  }
  return ok ? 0 : 1;
}
