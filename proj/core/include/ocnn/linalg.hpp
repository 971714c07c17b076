#pragma once

#include <Eigen/Dense>

namespace ocnn {

/// Row-major dense double matrix used throughout the library. Row-major
/// storage keeps the planar-rotation row updates contiguous.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

/// Largest absolute entry of `m` (0 for empty matrices).
double max_abs(const Mat& m);

/// max-abs of MᵀM − I; zero for perfectly orthogonal matrices.
double orthogonality_defect(const Mat& m);

bool all_finite(const Mat& m);

/// In-place left rotation of rows (i, j): row_i ← c·row_i + s·row_j,
/// row_j ← −s·row_i + c·row_j with c = cos θ, s = sin θ.
void rotate_rows(Mat& m, int i, int j, double theta);

/// In-place left application of the transposed rotation (the inverse of
/// rotate_rows with the same angle).
void rotate_rows_transposed(Mat& m, int i, int j, double theta);

}  // namespace ocnn
