#include "test_support.hpp"

#include "manitrans/errors.hpp"
#include "manitrans/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace manitrans;
using mt_test::rel_err;

namespace {

// unit sphere in R^3, points and vectors as 3x1 columns
Mat sphere_chr(const Mat& p, const Mat& u, const Mat& v) { return p * (u.transpose() * v)(0, 0); }

Mat e(int i) {
  Mat v = Mat::Zero(3, 1);
  v(i, 0) = 1.0;
  return v;
}

CurveFn great_circle() {
  return [](double s) { return std::pair{Mat(std::cos(s) * e(0) + std::sin(s) * e(1)),
                                         Mat(-std::sin(s) * e(0) + std::cos(s) * e(1))}; };
}

}  // namespace

TEST_CASE("scalar ode") {
  MatrixRhs f = [](double, const Mat& y) { return Mat(y); };
  OdeStats stats;
  auto out = integrate_matrix_ode(f, Mat::Ones(1, 1), 0.0, {0.5, 1.0, 3.0}, {}, &stats);
  REQUIRE(out.size() == 3);
  CHECK(std::abs(out[0](0, 0) - std::exp(0.5)) <= 1e-9);
  CHECK(std::abs(out[2](0, 0) - std::exp(3.0)) <= 1e-9 * std::exp(3.0));
  CHECK(stats.accepted > 0);

  // backwards in time
  auto back = integrate_matrix_ode(f, Mat::Ones(1, 1), 0.0, {-1.0, -2.0});
  CHECK(std::abs(back[1](0, 0) - std::exp(-2.0)) <= 1e-10);

  // grid point equal to t0 returns y0 untouched
  auto same = integrate_matrix_ode(f, Mat::Ones(1, 1), 0.0, {0.0});
  CHECK(same[0](0, 0) == 1.0);
}

TEST_CASE("tighter tolerances give smaller errors") {
  MatrixRhs f = [](double t, const Mat& y) { return Mat(std::cos(t) * y); };
  const double want = std::exp(std::sin(4.0));
  double prev = 1.0;
  for (double tol : {1e-5, 1e-7, 1e-9, 1e-11}) {
    OdeOptions opt;
    opt.rtol = opt.atol = tol;
    const double err = std::abs(integrate_matrix_ode(f, Mat::Ones(1, 1), 0.0, {4.0}, opt)[0](0, 0) - want);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev <= 1e-9);
}

TEST_CASE("blow-up reports the last good time") {
  MatrixRhs f = [](double, const Mat& y) { return Mat(y.array().square().matrix()); };
  OdeOptions opt;
  opt.max_steps = 20000;
  try {
    integrate_matrix_ode(f, Mat::Ones(1, 1), 0.0, {2.0}, opt);
    FAIL("expected an IntegrationError");
  } catch (const IntegrationError& err) {
    CHECK(err.last_good_t() > 0.9);
    CHECK(err.last_good_t() < 1.0);
  }
}

TEST_CASE("vanishing christoffel leaves the vector alone") {
  Rng rng(601);
  const Mat eta = random_normal(rng, 4, 3);
  ChristoffelFn zero = [](const Mat& p, const Mat&, const Mat&) { return Mat(Mat::Zero(p.rows(), p.cols())); };
  CurveFn line = [](double s) { return std::pair{Mat(s * Mat::Ones(4, 3)), Mat(Mat::Ones(4, 3))}; };
  auto out = integrate_transport(zero, line, eta, {0.7, 5.0});
  CHECK(rel_err(out[0], eta) <= 1e-15);
  CHECK(rel_err(out[1], eta) <= 1e-15);
}

TEST_CASE("transport on the sphere") {
  const double q = std::numbers::pi / 2;
  auto out = integrate_transport(sphere_chr, great_circle(), e(2), {q, 2 * q});
  CHECK((out[0] - e(2)).norm() <= 1e-9);
  CHECK((out[1] - e(2)).norm() <= 1e-9);

  // the velocity is carried to the velocity
  auto vel = integrate_transport(sphere_chr, great_circle(), e(1), {q, 3.0});
  CHECK((vel[0] + e(0)).norm() <= 1e-9);
  CHECK((vel[1] - great_circle()(3.0).second).norm() <= 1e-9);

  // there and back again
  auto there = integrate_transport(sphere_chr, great_circle(), e(1) + e(2), {1.3}).back();
  CurveFn reversed = [](double s) {
    auto [p, v] = great_circle()(1.3 - s);
    return std::pair{p, Mat(-v)};
  };
  auto back = integrate_transport(sphere_chr, reversed, there, {1.3}).back();
  CHECK((back - e(1) - e(2)).norm() <= 1e-9);
}

TEST_CASE("transport residual") {
  const double dt = 1e-3, t = 0.8;
  std::vector<Mat> ds, gs, vs;
  for (int i = -1; i <= 1; ++i) {
    auto [p, v] = great_circle()(t + i * dt);
    gs.push_back(p);
    vs.push_back(v);
    ds.push_back(v);
  }
  CHECK(transport_residual(ds, gs, vs, sphere_chr, dt) <= 1e-6);
  CHECK(transport_residual(ds, gs, sphere_chr, dt) <= 1e-6);

  // a vector held fixed in the ambient space is not parallel
  std::vector<Mat> frozen(3, vs[1]);
  CHECK(transport_residual(frozen, gs, vs, sphere_chr, dt) >= 1e-2);

  // the constant field under the flat connection
  ChristoffelFn zero = [](const Mat& p, const Mat&, const Mat&) { return Mat(Mat::Zero(p.rows(), p.cols())); };
  std::vector<Mat> c(3, e(2));
  CHECK(transport_residual(c, gs, vs, zero, dt) == 0.0);
}

TEST_CASE("geodesic residual") {
  const double dt = 1e-3;
  std::vector<Mat> gs;
  for (int i = 0; i < 5; ++i) gs.push_back(great_circle()(0.4 + i * dt).first);
  CHECK(geodesic_residual(gs, sphere_chr, dt) <= 1e-6);
  // a small circle is not a geodesic
  std::vector<Mat> small;
  for (int i = 0; i < 5; ++i) {
    const double s = 0.4 + i * dt;
    small.push_back(Mat(0.6 * (std::cos(s) * e(0) + std::sin(s) * e(1)) + 0.8 * e(2)));
  }
  CHECK(geodesic_residual(small, sphere_chr, dt) >= 1e-2);
}

TEST_CASE("gram drift") {
  Rng rng(603);
  MetricFn frob = [](const Mat&, const Mat& u, const Mat& v) { return (u.array() * v.array()).sum(); };
  const Mat p = Mat::Identity(3, 3);
  std::vector<Mat> vs{random_normal(rng, 3, 3), random_normal(rng, 3, 3)};
  auto g = gram_matrix(p, vs, frob);
  CHECK(g(0, 1) == g(1, 0));
  CHECK(g(0, 0) == doctest::Approx(vs[0].squaredNorm()));

  const Mat r = random_special_orthogonal(rng, 3);
  std::vector<Mat> rotated{r * vs[0], r * vs[1]};
  std::vector<Mat> scaled{2.0 * vs[0], vs[1]};
  auto drift = gram_drift(p, vs, {p, p, p}, {vs, rotated, scaled}, frob);
  REQUIRE(drift.size() == 3);
  CHECK(drift[0] == 0.0);
  CHECK(drift[1] <= 1e-13);
  CHECK(drift[2] == doctest::Approx(3.0 * vs[0].squaredNorm()));

  std::vector<Mat> one{vs[0]};
  CHECK(gram_drift(p, one, {p}, {one}, frob)[0] == 0.0);
}
