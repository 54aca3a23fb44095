#pragma once

// Matrix exponential and the exponential action exp(tA)B of a matrix-free
// linear operator, computed by a scaled truncated Taylor series.

#include "manitrans/types.hpp"

#include <span>

namespace manitrans {

/// A linear operator on rows x cols matrices, given by its action, the
/// action of its adjoint under the Frobenius pairing, and an upper bound on
/// its 1-norm in the vectorized (column-major) canonical basis.
struct LinearOperator {
  MatrixMap apply;
  MatrixMap apply_adjoint;
  double one_norm_bound = 0.0;
  Index rows = 0;
  Index cols = 0;

  Index domain_size() const { return rows * cols; }
};

LinearOperator zero_operator(Index rows, Index cols);
LinearOperator identity_operator(Index rows, Index cols);

/// Swaps apply and apply_adjoint. The 1-norm of the adjoint is the
/// infinity norm of the operator, so the bound must be supplied.
LinearOperator adjoint_of(const LinearOperator& op, double adjoint_one_norm_bound);

/// Dense matrix of op acting on column-major vec(X).
Mat vectorize_operator(const LinearOperator& op);

enum class Precision { single, double_ };

struct TaylorParams {
  int m_star = 1;  // Taylor order
  int s = 1;       // number of scaling steps
};

/// Orders and theta constants from the double/single precision tables of
/// Al-Mohy and Higham (2011), as used by scipy's expm_multiply.
struct ThetaEntry {
  int m;
  double theta;
};
std::span<const ThetaEntry> theta_table(Precision precision);

double unit_roundoff(Precision precision);

Mat matrix_exponential(const Mat& m);

TaylorParams select_taylor_params(double one_norm, Precision precision = Precision::double_);

struct ExpaOptions {
  Precision precision = Precision::double_;
  /// Switch to dense expm for tiny domains whose scaling count exceeds
  /// dense_fallback_min_s.
  bool allow_dense_fallback = true;
  Index dense_fallback_max_entries = 64;
  int dense_fallback_min_s = 64;
};

/// exp(t op) B.
Mat expa(const LinearOperator& op, const Mat& b, double t, const ExpaOptions& options = {});

/// Exact vectorized 1-norm: max_j |vec(op(E_j))|_1 over canonical basis E_j.
double one_norm_exhaustive(const LinearOperator& op, Index max_entries = 400);

}  // namespace manitrans
