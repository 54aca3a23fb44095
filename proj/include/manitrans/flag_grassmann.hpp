#pragma once

// Flag manifolds as quotients of St(n, d) by block-diagonal rotations of
// the column groups, in Stiefel coordinates; the canonical-metric transport
// and the closed-form Grassmann transport.

#include "manitrans/stiefel.hpp"

#include <vector>

namespace manitrans {

class FlagSignature {
 public:
  /// Column block sizes d_1..d_p; the complement n - d is implicit.
  FlagSignature(std::vector<Index> d_list, Index n);

  const std::vector<Index>& d_list() const { return d_list_; }
  const std::vector<Index>& offsets() const { return offsets_; }
  Index d() const { return d_; }
  Index n() const { return n_; }
  Index p() const { return static_cast<Index>(d_list_.size()); }

  /// Copy of m (d x d) with the flag diagonal blocks zeroed.
  Mat zero_blocks(const Mat& m) const;
  /// Only the flag diagonal blocks of m.
  Mat keep_blocks(const Mat& m) const;
  /// zero_blocks applied to the top d rows of a (d + k) x d matrix.
  Mat zero_top_blocks(const Mat& w) const;

 private:
  std::vector<Index> d_list_;
  std::vector<Index> offsets_;
  Index d_ = 0;
  Index n_ = 0;
};

/// Tangent projection followed by removal of the flag diagonal blocks of Y^T W.
Mat flag_horizontal_project(const FlagSignature& sig, const Mat& y, const Mat& w);
void check_flag_horizontal(const FlagSignature& sig, const Mat& y, const Mat& v,
                           double tol = 1e-9);

/// sym(M) plus the antisymmetric part of the flag diagonal blocks.
Mat symf(const FlagSignature& sig, const Mat& m);

/// Y (xi^T eta)_symf + (1 - alpha)(I - Y Y^T)(xi eta^T + eta xi^T) Y.
Mat flag_christoffel(const FlagSignature& sig, const Mat& y, const Mat& xi, const Mat& eta,
                     double alpha);

Mat flag_geodesic(const FlagSignature& sig, const Mat& y, const Mat& xi, double alpha, double t);

/// P at alpha = 1/2, balanced, with the top block masked to m.
LinearOperator flag_p_operator(const FlagSignature& sig, const TangentDecomposition& dec);

/// Canonical metric (alpha = 1/2) transport along the geodesic from Y with
/// horizontal velocity xi, reusable for many vectors.
class FlagTransportPlan {
 public:
  FlagTransportPlan(FlagSignature sig, const Mat& y, const Mat& xi);

  const FlagSignature& signature() const { return sig_; }
  const TangentDecomposition& decomposition() const { return dec_; }
  Mat geodesic(double t) const;
  Mat velocity(double t) const;
  Mat transport(const Mat& eta, double t, const ExpaOptions& options = {}) const;
  std::vector<Mat> transport(const std::vector<Mat>& etas, double t,
                             const ExpaOptions& options = {}) const;

 private:
  FlagSignature sig_;
  Mat y_, f_, big_;
  TangentDecomposition dec_;
  LinearOperator p_;
};

Mat flag_transport_canonical(const FlagSignature& sig, const Mat& y, const Mat& xi,
                             const Mat& eta, double t, const ExpaOptions& options = {});

/// Grassmann geodesic and transport for Y^T xi = Y^T eta = 0 via the compact
/// SVD xi = Q S V^T.
Mat grassmann_geodesic(const Mat& y, const Mat& xi, double t);
Mat grassmann_transport(const Mat& y, const Mat& xi, const Mat& eta, double t);

}  // namespace manitrans
