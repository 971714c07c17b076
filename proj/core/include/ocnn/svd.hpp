#pragma once

#include "ocnn/linalg.hpp"

namespace ocnn {

/// Full singular-value factorization m = u · Σ · v with square orthogonal
/// factors: u is rows×rows, v is cols×cols, and Σ is the rows×cols
/// rectangular diagonal carrying `sigma` (non-increasing, non-negative).
/// Note the convention: v multiplies on the right untransposed.
struct SvdResult {
    Mat u;
    Vec sigma;
    Mat v;

    /// Assembles u · Σ · v.
    Mat compose() const;
};

/// One-sided Jacobi SVD. Sweeps plane rotations until every column pair of
/// the working matrix is orthogonal to within `tol` (relative), then reads
/// singular values off the column norms and completes the short factor to a
/// full orthogonal basis. Throws ConvergenceFailure if `max_sweeps` sweeps
/// do not reach the tolerance.
SvdResult jacobi_svd(const Mat& m, int max_sweeps = 100, double tol = 1e-12);

}  // namespace ocnn
