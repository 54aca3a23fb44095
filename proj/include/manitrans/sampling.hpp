#pragma once

// Seeded random points and tangent vectors for tests and benchmarks.

#include "manitrans/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace manitrans {

using Rng = std::mt19937_64;

Mat random_normal(Rng& rng, Index rows, Index cols);
Mat random_skew(Rng& rng, Index n);
/// Haar-distributed element of SO(n).
Mat random_special_orthogonal(Rng& rng, Index n);
/// Orthonormal n x d.
Mat random_stiefel(Rng& rng, Index n, Index d);
/// Well-conditioned element of GL+(n): I + a random matrix of small norm,
/// times a random rotation.
Mat random_gl_plus(Rng& rng, Index n);

using ProjectFn = std::function<Mat(const Mat&)>;
using NormSqFn = std::function<double(const Mat&)>;

/// project(Gaussian) rescaled to the given length under norm_sq.
Mat random_tangent(Rng& rng, Index rows, Index cols, const ProjectFn& project,
                   const NormSqFn& norm_sq, double length = 1.0);

/// count tangents with lengths drawn uniformly from the integers
/// [min_length, max_length].
std::vector<Mat> random_tangents_integer_lengths(Rng& rng, Index rows, Index cols, int count,
                                                 const ProjectFn& project,
                                                 const NormSqFn& norm_sq, int min_length = 1,
                                                 int max_length = 60);

}  // namespace manitrans
