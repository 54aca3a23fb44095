#pragma once

// Experiment drivers behind the manitrans-bench CLI: timing grids, the
// isometry drift experiment and oracle verification sweeps.

#include "manitrans/oracle.hpp"
#include "manitrans/sampling.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace manitrans {

enum class Manifold { stiefel, flag, grassmann, so, gl };

Manifold parse_manifold(const std::string& name);
const char* manifold_name(Manifold m);

struct BenchConfig {
  Manifold manifold = Manifold::stiefel;
  Index n = 100;
  Index d = 10;
  std::vector<Index> d_list;  // flag only; d becomes their sum
  double alpha = 0.5;         // stiefel, so; flag and grassmann use 1/2
  double beta = 0.7;          // gl
  std::vector<double> t_grid{0.5, 1.0, 2.0, 5.0, 20.0};
  int num_vectors = 20;
  std::uint64_t seed = 42;
  int repeats = 5;
  std::string output_path;
};

/// Checks sizes, parameters and the grid; fills d from d_list. Throws
/// ConfigError. max_n caps n for the dense oracle.
BenchConfig normalized(BenchConfig config, std::optional<Index> max_n = std::nullopt);

/// The value reported in the alpha column (beta for gl).
double metric_parameter(const BenchConfig& config);

/// One random geodesic on the configured manifold with everything needed to
/// transport along it and to check the result independently.
struct TransportCase {
  Mat point;
  Mat xi;
  std::function<std::vector<Mat>(const std::vector<Mat>&, double)> transport;
  /// Transport from scratch (decomposition included), the timed operation.
  std::function<Mat(const Mat&, double)> transport_fresh;
  std::function<Mat(double)> geodesic;
  CurveFn curve;
  ChristoffelFn christoffel;
  MetricFn metric;
  /// Gaussian direction projected to the tangent (horizontal) space.
  std::function<Mat(Rng&)> random_direction;
  /// Normal/vertical component of v at point, relative to max(1, |v|).
  std::function<double(const Mat&, const Mat&)> tangency;
};

/// Velocity has unit length under the metric.
TransportCase make_case(const BenchConfig& config, Rng& rng);

/// Tangent vectors at the case's base point with integer lengths in [1, 60].
std::vector<Mat> sample_vectors(const TransportCase& c, Rng& rng, int count);

struct TimingRow {
  Manifold manifold;
  Index n, d;
  double alpha, t, median_seconds, residual_check;
};

struct IsometryRow {
  Manifold manifold;
  Index n, d;
  double alpha, t, max_gram_drift, log10_drift;
};

struct VerifyRow {
  Manifold manifold;
  Index n, d;
  double alpha, t, transport_residual, oracle_error, tangency;
  bool pass;
};

/// Tangency bound a timing row must meet to be reported.
inline constexpr double kTimingTangencyTol = 1e-9;

/// Thresholds of a passing verification row.
struct VerifyThresholds {
  double oracle_error = 1e-6;
  double residual = 1e-5;
  double tangency = 1e-9;
  double dt = 1e-3;
};

/// Median over repeats after one warm-up. Throws NumericalError if a result
/// fails the tangency check.
std::vector<TimingRow> run_timing(const BenchConfig& config);
std::vector<IsometryRow> run_isometry(const BenchConfig& config);
std::vector<VerifyRow> run_verify(const BenchConfig& config, const VerifyThresholds& thr = {});

/// Shortest decimal string that reads back to the same double.
std::string format_double(double x);

inline constexpr const char* kCsvVersionLine = "# manitrans-bench v1";

void write_csv(std::ostream& os, const std::vector<TimingRow>& rows);
void write_csv(std::ostream& os, const std::vector<IsometryRow>& rows);
void write_csv(std::ostream& os, const std::vector<VerifyRow>& rows);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace manitrans
