#include "manitrans/oracle.hpp"
#include "manitrans/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace manitrans {

namespace {

// Dormand & Prince (1980), RK5(4)7M.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// difference between the 5th and embedded 4th order weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

double scaled_rms(const Mat& err, const Mat& y0, const Mat& y1, double atol, double rtol) {
  if (err.size() == 0) return 0.0;
  Eigen::ArrayXXd scale = atol + rtol * y0.array().abs().max(y1.array().abs());
  return std::sqrt((err.array() / scale).square().mean());
}

}  // namespace

std::vector<Mat> integrate_matrix_ode(const MatrixRhs& f, const Mat& y0, double t0,
                                      const std::vector<double>& grid, const OdeOptions& options,
                                      OdeStats* stats) {
  if (!(options.rtol > 0.0) || !(options.atol > 0.0))
    throw ValidationError("integrate_matrix_ode: tolerances must be positive");
  if (grid.empty()) return {};
  const double dir = grid.back() >= t0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double prev = i == 0 ? t0 : grid[i - 1];
    if (!std::isfinite(grid[i]) || dir * (grid[i] - prev) < 0.0)
      throw ValidationError("integrate_matrix_ode: grid must be monotone away from t0");
  }

  std::vector<Mat> out;
  out.reserve(grid.size());
  double t = t0;
  Mat y = y0;
  Mat k1 = f(t, y);

  double h = options.initial_step;
  if (h <= 0.0) {
    const double d0 = fro(y), d1 = fro(k1);
    h = (d0 > 1e-5 && d1 > 1e-5) ? 0.01 * d0 / d1 : 1e-4;
  }
  h = std::min(h, std::abs(grid.back() - t0));
  long steps = 0;
  OdeStats local;

  for (double target : grid) {
    while (dir * (target - t) > 0.0) {
      const double remaining = std::abs(target - t);
      bool last = false;
      double step = h;
      if (step >= remaining * (1.0 - 1e-12)) {
        step = remaining;
        last = true;
      }
      const double hs = dir * step;
      Mat k2 = f(t + c2 * hs, y + hs * (a21 * k1));
      Mat k3 = f(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
      Mat k4 = f(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
      Mat k5 = f(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      Mat k6 = f(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      Mat y1 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      Mat k7 = f(t + hs, y1);
      Mat err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double en = scaled_rms(err, y, y1, options.atol, options.rtol);
      if (!std::isfinite(en)) en = 1e10;

      if (++steps > options.max_steps) {
        std::ostringstream os;
        os << "integrate_matrix_ode: step budget exhausted at t = " << t;
        throw IntegrationError(os.str(), t);
      }
      if (en <= 1.0) {
        t = last ? target : t + hs;
        y = std::move(y1);
        k1 = std::move(k7);
        ++local.accepted;
        double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        // a step shortened to hit the grid says little about the next one
        if (!last) h = step * fac;
        else h = std::max(h, step * fac);
      } else {
        ++local.rejected;
        h = step * std::max(0.2, 0.9 * std::pow(en, -0.2));
        if (h < options.min_step) {
          std::ostringstream os;
          os << "integrate_matrix_ode: step size underflow at t = " << t;
          throw IntegrationError(os.str(), t);
        }
      }
    }
    out.push_back(y);
  }
  if (stats) *stats = local;
  return out;
}

std::vector<Mat> integrate_transport(const ChristoffelFn& christoffel, const CurveFn& curve,
                                     const Mat& eta0, const std::vector<double>& grid,
                                     const OdeOptions& options) {
  MatrixRhs rhs = [&](double t, const Mat& delta) -> Mat {
    auto [g, gd] = curve(t);
    return -christoffel(g, gd, delta);
  };
  return integrate_matrix_ode(rhs, eta0, 0.0, grid, options);
}

double transport_residual(const std::vector<Mat>& delta, const std::vector<Mat>& gamma,
                          const std::vector<Mat>& gamma_dot, const ChristoffelFn& christoffel,
                          double dt) {
  if (delta.size() < 3) throw ValidationError("transport_residual: need at least 3 samples");
  if (gamma.size() != delta.size() || gamma_dot.size() != delta.size())
    throw ValidationError("transport_residual: sample counts differ");
  if (!(dt > 0.0)) throw ValidationError("transport_residual: dt must be positive");
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < delta.size(); ++i) {
    Mat ddot = (delta[i + 1] - delta[i - 1]) / (2.0 * dt);
    worst = std::max(worst, fro(ddot + christoffel(gamma[i], gamma_dot[i], delta[i])));
  }
  return worst;
}

double transport_residual(const std::vector<Mat>& delta, const std::vector<Mat>& gamma,
                          const ChristoffelFn& christoffel, double dt) {
  if (gamma.size() < 3) throw ValidationError("transport_residual: need at least 3 samples");
  std::vector<Mat> gd(gamma.size());
  for (std::size_t i = 1; i + 1 < gamma.size(); ++i)
    gd[i] = (gamma[i + 1] - gamma[i - 1]) / (2.0 * dt);
  gd.front() = (gamma[1] - gamma[0]) / dt;
  gd.back() = (gamma[gamma.size() - 1] - gamma[gamma.size() - 2]) / dt;
  return transport_residual(delta, gamma, gd, christoffel, dt);
}

double geodesic_residual(const std::vector<Mat>& gamma, const ChristoffelFn& christoffel,
                         double dt) {
  if (gamma.size() < 3) throw ValidationError("geodesic_residual: need at least 3 samples");
  if (!(dt > 0.0)) throw ValidationError("geodesic_residual: dt must be positive");
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < gamma.size(); ++i) {
    Mat acc = (gamma[i + 1] - 2.0 * gamma[i] + gamma[i - 1]) / (dt * dt);
    Mat vel = (gamma[i + 1] - gamma[i - 1]) / (2.0 * dt);
    worst = std::max(worst, fro(acc + christoffel(gamma[i], vel, vel)));
  }
  return worst;
}

Mat gram_matrix(const Mat& point, const std::vector<Mat>& vs, const MetricFn& metric) {
  const Index k = static_cast<Index>(vs.size());
  Mat g(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = i; j < k; ++j) g(i, j) = g(j, i) = metric(point, vs[i], vs[j]);
  return g;
}

std::vector<double> gram_drift(const Mat& point0, const std::vector<Mat>& initial,
                               const std::vector<Mat>& points,
                               const std::vector<std::vector<Mat>>& transported,
                               const MetricFn& metric) {
  if (points.size() != transported.size())
    throw ValidationError("gram_drift: one base point per time slot is required");
  const Mat g0 = gram_matrix(point0, initial, metric);
  std::vector<double> out;
  out.reserve(points.size());
  for (std::size_t s = 0; s < points.size(); ++s) {
    if (transported[s].size() != initial.size())
      throw ValidationError("gram_drift: vector count mismatch");
    const Mat gt = gram_matrix(points[s], transported[s], metric);
    out.push_back(g0.size() == 0 ? 0.0 : (gt - g0).cwiseAbs().maxCoeff());
  }
  return out;
}

}  // namespace manitrans
