#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string_view>

namespace manitrans {

using Index = Eigen::Index;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Linear map between matrix spaces, evaluated matrix-free.
using MatrixMap = std::function<Mat(const Mat&)>;

/// Symmetric and antisymmetric parts.
inline Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }
inline Mat skew(const Mat& m) { return 0.5 * (m - m.transpose()); }

/// Lie bracket [a, b] = ab - ba.
inline Mat bracket(const Mat& a, const Mat& b) { return a * b - b * a; }

/// Induced 1-norm (max column sum) and infinity norm (max row sum).
inline double norm1(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().colwise().sum().maxCoeff();
}
inline double norm_inf(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Frobenius norm that is zero for empty matrices.
inline double fro(const Mat& m) { return m.size() == 0 ? 0.0 : m.norm(); }

namespace detail {

void require_square(const Mat& m, std::string_view what);
void require_same_shape(const Mat& a, const Mat& b, std::string_view what);
void require_finite(const Mat& m, std::string_view what);
void warn(std::string_view message);

}  // namespace detail

}  // namespace manitrans
