#pragma once

// Brute-force checks for the closed forms: an adaptive Dormand-Prince 5(4)
// integrator for matrix ODEs, the transport equation driven by a dense
// Christoffel function, finite-difference residuals and Gram drift.

#include "manitrans/types.hpp"

#include <utility>
#include <vector>

namespace manitrans {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double initial_step = 0.0;  // 0 picks one from the derivative scale
  double min_step = 1e-13;
  long max_steps = 5'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
};

using MatrixRhs = std::function<Mat(double, const Mat&)>;

/// Solution of y' = f(t, y), y(t0) = y0 at every point of grid, which must
/// be monotone (either direction) away from t0. Steps are shortened to land
/// on the grid points exactly. Throws IntegrationError with the last
/// accepted time when the step size underflows or the budget runs out.
std::vector<Mat> integrate_matrix_ode(const MatrixRhs& f, const Mat& y0, double t0,
                                      const std::vector<double>& grid,
                                      const OdeOptions& options = {}, OdeStats* stats = nullptr);

/// Gamma(point; velocity, v).
using ChristoffelFn = std::function<Mat(const Mat&, const Mat&, const Mat&)>;
/// t -> (gamma(t), gamma'(t)).
using CurveFn = std::function<std::pair<Mat, Mat>(double)>;

/// Delta' = -Gamma(gamma, gamma', Delta), Delta(0) = eta0, sampled on grid.
std::vector<Mat> integrate_transport(const ChristoffelFn& christoffel, const CurveFn& curve,
                                     const Mat& eta0, const std::vector<double>& grid,
                                     const OdeOptions& options = {});

/// max over interior samples of ||(D[i+1] - D[i-1]) / 2dt + Gamma(g, g', D)||_F
/// with g' from centered differences of the curve samples.
double transport_residual(const std::vector<Mat>& delta, const std::vector<Mat>& gamma,
                          const ChristoffelFn& christoffel, double dt);

/// Same with exact velocities.
double transport_residual(const std::vector<Mat>& delta, const std::vector<Mat>& gamma,
                          const std::vector<Mat>& gamma_dot, const ChristoffelFn& christoffel,
                          double dt);

/// max over interior samples of ||g'' + Gamma(g, g', g')||_F by second
/// differences.
double geodesic_residual(const std::vector<Mat>& gamma, const ChristoffelFn& christoffel,
                         double dt);

using MetricFn = std::function<double(const Mat&, const Mat&, const Mat&)>;

/// For each time slot, max |G_t - G_0| entrywise where G is the Gram matrix
/// of the vectors under metric(point, u, v).
std::vector<double> gram_drift(const Mat& point0, const std::vector<Mat>& initial,
                               const std::vector<Mat>& points,
                               const std::vector<std::vector<Mat>>& transported,
                               const MetricFn& metric);

/// Gram matrix of vs at point.
Mat gram_matrix(const Mat& point, const std::vector<Mat>& vs, const MetricFn& metric);

}  // namespace manitrans
