#include "manitrans/sampling.hpp"
#include "manitrans/errors.hpp"

#include <cmath>

namespace manitrans {

Mat random_normal(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> g;
  Mat m(rows, cols);
  // fill column by column so the stream order is fixed
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = g(rng);
  return m;
}

Mat random_skew(Rng& rng, Index n) { return skew(random_normal(rng, n, n)); }

Mat random_stiefel(Rng& rng, Index n, Index d) {
  if (d < 1 || d > n) throw DimensionError("random_stiefel: need 1 <= d <= n");
  Eigen::HouseholderQR<Mat> qr(random_normal(rng, n, d));
  Mat q = qr.householderQ() * Mat::Identity(n, d);
  // sign fix makes the distribution Haar
  const Mat r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

Mat random_special_orthogonal(Rng& rng, Index n) {
  Mat q = random_stiefel(rng, n, n);
  if (Eigen::PartialPivLU<Mat>(q).determinant() < 0.0) q.col(0) *= -1.0;
  return q;
}

Mat random_gl_plus(Rng& rng, Index n) {
  Mat m = Mat::Identity(n, n) + 0.3 * random_normal(rng, n, n) / std::sqrt(double(n));
  if (Eigen::PartialPivLU<Mat>(m).determinant() < 0.0) m.col(0) *= -1.0;
  return random_special_orthogonal(rng, n) * m;
}

Mat random_tangent(Rng& rng, Index rows, Index cols, const ProjectFn& project,
                   const NormSqFn& norm_sq, double length) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    Mat v = project(random_normal(rng, rows, cols));
    const double nsq = norm_sq(v);
    if (nsq > 1e-20) return v * (length / std::sqrt(nsq));
  }
  throw NumericalError("random_tangent: projection keeps returning zero");
}

std::vector<Mat> random_tangents_integer_lengths(Rng& rng, Index rows, Index cols, int count,
                                                 const ProjectFn& project,
                                                 const NormSqFn& norm_sq, int min_length,
                                                 int max_length) {
  if (min_length < 1 || max_length < min_length)
    throw ValidationError("random_tangents_integer_lengths: bad length range");
  std::uniform_int_distribution<int> len(min_length, max_length);
  std::vector<Mat> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const double l = len(rng);
    out.push_back(random_tangent(rng, rows, cols, project, norm_sq, l));
  }
  return out;
}

}  // namespace manitrans
