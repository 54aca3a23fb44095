#include "manitrans/expaction.hpp"
#include "manitrans/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace manitrans {

namespace {

// theta_m for u = 2^-53, Al-Mohy & Higham, "Computing the action of the
// matrix exponential", SIAM J. Sci. Comput. 33 (2011), Table A.3. Same
// values as scipy.sparse.linalg._expm_multiply._theta.
constexpr std::array<ThetaEntry, 35> kThetaDouble{{
    {1, 2.29e-16}, {2, 2.58e-8}, {3, 1.39e-5}, {4, 3.40e-4}, {5, 2.40e-3},
    {6, 9.07e-3},  {7, 2.38e-2}, {8, 5.00e-2}, {9, 8.96e-2}, {10, 1.44e-1},
    {11, 2.14e-1}, {12, 3.00e-1}, {13, 4.00e-1}, {14, 5.14e-1}, {15, 6.41e-1},
    {16, 7.81e-1}, {17, 9.31e-1}, {18, 1.09},   {19, 1.26},   {20, 1.44},
    {21, 1.62},    {22, 1.82},    {23, 2.01},   {24, 2.22},   {25, 2.43},
    {26, 2.64},    {27, 2.86},    {28, 3.08},   {29, 3.31},   {30, 3.54},
    {35, 4.7},     {40, 6.0},     {45, 7.2},    {50, 8.5},    {55, 9.9},
}};

// u = 2^-24, Al-Mohy & Higham Table 3.1.
constexpr std::array<ThetaEntry, 11> kThetaSingle{{
    {5, 1.3e-1}, {10, 1.0}, {15, 2.2}, {20, 3.6}, {25, 4.9}, {30, 6.3},
    {35, 7.7},   {40, 9.1}, {45, 11.0}, {50, 12.0}, {55, 13.0},
}};

// Largest scaling count we are willing to run; beyond this the bound is
// useless and the caller should rescale t.
constexpr double kMaxScaling = 1e8;

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Mat unvec(const Vec& v, Index rows, Index cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

}  // namespace

LinearOperator zero_operator(Index rows, Index cols) {
  auto z = [rows, cols](const Mat&) -> Mat { return Mat::Zero(rows, cols); };
  return {z, z, 0.0, rows, cols};
}

LinearOperator identity_operator(Index rows, Index cols) {
  auto id = [](const Mat& x) -> Mat { return x; };
  return {id, id, 1.0, rows, cols};
}

LinearOperator adjoint_of(const LinearOperator& op, double adjoint_one_norm_bound) {
  return {op.apply_adjoint, op.apply, adjoint_one_norm_bound, op.rows, op.cols};
}

Mat vectorize_operator(const LinearOperator& op) {
  const Index n = op.domain_size();
  Mat dense(n, n);
  Mat e = Mat::Zero(op.rows, op.cols);
  for (Index j = 0; j < n; ++j) {
    e(j) = 1.0;
    Mat col = op.apply(e);
    detail::require_same_shape(col, e, "vectorize_operator");
    dense.col(j) = Eigen::Map<const Vec>(col.data(), n);
    e(j) = 0.0;
  }
  return dense;
}

std::span<const ThetaEntry> theta_table(Precision precision) {
  if (precision == Precision::single) return kThetaSingle;
  return kThetaDouble;
}

double unit_roundoff(Precision precision) {
  return precision == Precision::single ? std::ldexp(1.0, -24) : std::ldexp(1.0, -53);
}

Mat matrix_exponential(const Mat& m) {
  detail::require_square(m, "matrix_exponential");
  detail::require_finite(m, "matrix_exponential");
  if (m.size() == 0) return m;
  Mat e = m.exp();
  if (!e.allFinite()) throw NumericalError("matrix_exponential: result overflowed");
  return e;
}

TaylorParams select_taylor_params(double one_norm, Precision precision) {
  if (std::isnan(one_norm) || one_norm < 0.0)
    throw ValidationError("select_taylor_params: norm must be nonnegative");
  auto table = theta_table(precision);
  if (one_norm == 0.0) return {table.front().m, 1};
  if (!std::isfinite(one_norm)) throw NumericalError("select_taylor_params: infinite norm");

  double best_cost = std::numeric_limits<double>::infinity();
  const ThetaEntry* best = &table.front();
  for (const auto& e : table) {
    double cost = e.m * std::ceil(one_norm / e.theta);
    if (cost < best_cost) {
      best_cost = cost;
      best = &e;
    }
  }
  double s = std::max(1.0, std::ceil(one_norm / best->theta));
  if (s > kMaxScaling) {
    std::ostringstream os;
    os << "select_taylor_params: scaling count " << s << " too large for norm " << one_norm;
    throw NumericalError(os.str(), best->m, std::numeric_limits<int>::max());
  }
  return {best->m, static_cast<int>(s)};
}

Mat expa(const LinearOperator& op, const Mat& b, double t, const ExpaOptions& options) {
  if (b.rows() != op.rows || b.cols() != op.cols) {
    std::ostringstream os;
    os << "expa: operator acts on " << op.rows << "x" << op.cols << " matrices, got "
       << b.rows() << "x" << b.cols();
    throw DimensionError(os.str());
  }
  if (!std::isfinite(t)) throw ValidationError("expa: t must be finite");
  if (!(op.one_norm_bound >= 0.0)) throw ValidationError("expa: bad one-norm bound");
  if (t == 0.0 || op.one_norm_bound == 0.0 || b.size() == 0) return b;

  const TaylorParams p = select_taylor_params(std::abs(t) * op.one_norm_bound, options.precision);

  if (options.allow_dense_fallback && op.domain_size() <= options.dense_fallback_max_entries &&
      p.s > options.dense_fallback_min_s) {
    Mat e = matrix_exponential(t * vectorize_operator(op));
    Vec v = e * Eigen::Map<const Vec>(b.data(), b.size());
    return unvec(v, b.rows(), b.cols());
  }

  const double tol = unit_roundoff(options.precision);
  const double h = t / p.s;
  Mat f = b;
  Mat bb = b;
  for (int i = 0; i < p.s; ++i) {
    double c1 = max_abs(bb);
    for (int j = 1; j <= p.m_star; ++j) {
      bb = (h / j) * op.apply(bb);
      double c2 = max_abs(bb);
      f += bb;
      if (c1 + c2 <= tol * max_abs(f)) break;
      c1 = c2;
    }
    if (!f.allFinite()) {
      std::ostringstream os;
      os << "expa: non-finite value with m = " << p.m_star << ", s = " << p.s;
      throw NumericalError(os.str(), p.m_star, p.s);
    }
    bb = f;
  }
  return f;
}

double one_norm_exhaustive(const LinearOperator& op, Index max_entries) {
  const Index n = op.domain_size();
  if (n > max_entries) {
    std::ostringstream os;
    os << "one_norm_exhaustive: domain has " << n << " entries, cap is " << max_entries
       << "; use an analytic bound instead";
    throw CapacityError(os.str());
  }
  double best = 0.0;
  Mat e = Mat::Zero(op.rows, op.cols);
  for (Index j = 0; j < n; ++j) {
    e(j) = 1.0;
    best = std::max(best, op.apply(e).cwiseAbs().sum());
    e(j) = 0.0;
  }
  return best;
}

}  // namespace manitrans
