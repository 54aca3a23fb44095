#pragma once

// Bilinear forms on matrix Lie algebras and the projections that describe a
// transposable split g = a + a_join + a_top.

#include "manitrans/types.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace manitrans {

/// (beta0, beta1) of the deformed metric; both nonzero.
class MetricParams {
 public:
  MetricParams(double beta0, double beta1);

  double beta0() const { return beta0_; }
  double beta1() const { return beta1_; }
  double beta() const { return beta1_ / beta0_; }

 private:
  double beta0_;
  double beta1_;
};

/// Dimensions of sym/skew parts of a and of its complement in g. Known in
/// closed form for the factory splits, which lets the signature check skip
/// the numerical rank computation.
struct EigenspaceDims {
  Index perp_sym = 0;
  Index perp_skew = 0;
  Index a_sym = 0;
  Index a_skew = 0;
};

/// Lie algebra g of n x n matrices with subalgebra a, both transposable,
/// given by projections. proj_k is only set for quotient geometries.
struct AlgebraSplit {
  Index n = 0;
  MatrixMap proj_g;
  MatrixMap proj_a;
  MatrixMap proj_k;
  /// Upper bound on the induced 1-norm of proj_a (1 for coordinate masks
  /// and for skew/sym parts).
  double proj_a_one_norm = 1.0;
  std::optional<EigenspaceDims> eigenspace_dims;
  std::string name;

  bool has_k() const { return static_cast<bool>(proj_k); }
};

/// g = gl(n), a = so(n).
AlgebraSplit gl_split(Index n);
/// g = so(n), a = so(d) in the top-left block.
AlgebraSplit so_split(Index n, Index d);
/// g = gl(n), a = gl(k) in the top-left block.
AlgebraSplit block_split(Index n, Index k);

/// Copy of split with its a replaced by another projection. Dimension
/// metadata is dropped.
AlgebraSplit with_subalgebra(const AlgebraSplit& split, MatrixMap proj_a, std::string name);

/// Random-probe check of idempotence, transposability, a in g and closure
/// under brackets. Throws ValidationError on the first failure.
void validate_split(const AlgebraSplit& split, int probes = 6, double tol = 1e-10);

double trace_form(const Mat& a, const Mat& b);
double frobenius_form(const Mat& a, const Mat& b);

/// beta0 (Tr hg - Tr h_a g_a) - beta1 Tr h_a g_a.
double beta_form(const Mat& g, const Mat& h, const AlgebraSplit& split,
                 const MetricParams& params);

/// Same without the membership check; for hot loops.
double beta_form_unchecked(const Mat& g, const Mat& h, const AlgebraSplit& split,
                           const MetricParams& params);

/// ||w - proj(w)||_F <= tol * max(1, ||w||_F).
bool in_subspace(const MatrixMap& proj, const Mat& w, double tol = 1e-10);

using BilinearForm = std::function<double(const Mat&, const Mat&)>;

/// Projection of w onto span(basis) that is orthogonal under form. The
/// Gram matrix must be invertible.
Mat gram_projection(const std::vector<Mat>& basis, const Mat& w, const BilinearForm& form);

/// Frobenius-orthonormal basis of the range of proj on n x n matrices,
/// found by a rank-revealing QR of the images of the unit matrices.
std::vector<Mat> range_basis(const MatrixMap& proj, Index n, double rank_tol = 1e-10);

struct SplitComponents {
  MatrixMap proj_a_perp;
  MatrixMap proj_a_join;
  MatrixMap proj_a_top;
  Index dim_g = 0;
  Index dim_a = 0;
  Index dim_join = 0;
  Index dim_top = 0;
};

/// Numerical construction of a_perp, a_join = [a, a_perp] and the
/// commutant a_top of a in a_perp. Dense in n^2, so n is capped.
SplitComponents derive_split_components(const AlgebraSplit& split, Index max_n = 10);

enum class Signature { riemannian, pseudo_riemannian };

struct EigenBlock {
  const char* space;
  double eigenvalue;
  Index dim;
};

struct SignatureSummary {
  Signature kind = Signature::pseudo_riemannian;
  std::array<EigenBlock, 4> blocks{};
};

/// Sign pattern of I_beta = (beta0 (1 - p_a) - beta1 p_a) o transpose on g.
SignatureSummary classify_metric_signature(const AlgebraSplit& split, const MetricParams& params,
                                           Index max_numeric_n = 16);

}  // namespace manitrans
