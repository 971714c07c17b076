#include "ocnn/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ocnn/errors.hpp"

namespace ocnn {

Mat SvdResult::compose() const {
    Mat rect = Mat::Zero(u.rows(), v.rows());
    for (Eigen::Index i = 0; i < sigma.size(); ++i) rect(i, i) = sigma(i);
    return u * rect * v;
}

namespace {

// Hestenes one-sided Jacobi on a tall matrix: orthogonalizes the columns of
// `a` (m×n, m >= n) by right rotations, accumulating them into `r` (n×n).
// On return a = a_in · r with mutually orthogonal columns.
void orthogonalize_columns(Eigen::MatrixXd& a, Eigen::MatrixXd& r, int max_sweeps, double tol) {
    const Eigen::Index n = a.cols();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double alpha = a.col(p).squaredNorm();
                const double beta = a.col(q).squaredNorm();
                const double gamma = a.col(p).dot(a.col(q));
                if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;

                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t =
                    std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;

                const Eigen::VectorXd ap = a.col(p);
                a.col(p) = c * ap - s * a.col(q);
                a.col(q) = s * ap + c * a.col(q);
                const Eigen::VectorXd rp = r.col(p);
                r.col(p) = c * rp - s * r.col(q);
                r.col(q) = s * rp + c * r.col(q);
                rotated = true;
            }
        }
        if (!rotated) return;
    }
    throw ConvergenceFailure("one-sided Jacobi did not converge within " +
                             std::to_string(max_sweeps) + " sweeps");
}

// Extends `basis` (m×k, orthonormal columns, k <= m) to a full m×m
// orthonormal basis using coordinate vectors, with one re-orthogonalization
// pass per candidate.
Eigen::MatrixXd complete_basis(const Eigen::MatrixXd& basis) {
    const Eigen::Index m = basis.rows();
    Eigen::MatrixXd full(m, m);
    Eigen::Index have = basis.cols();
    full.leftCols(have) = basis;

    for (Eigen::Index cand = 0; cand < m && have < m; ++cand) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(m, cand);
        for (int pass = 0; pass < 2; ++pass) {
            v -= full.leftCols(have) * (full.leftCols(have).transpose() * v);
        }
        const double norm = v.norm();
        if (norm > 0.1) {
            full.col(have++) = v / norm;
        }
    }
    if (have < m) {
        throw ConvergenceFailure("failed to complete orthonormal basis");
    }
    return full;
}

}  // namespace

SvdResult jacobi_svd(const Mat& m, int max_sweeps, double tol) {
    if (m.rows() < 1 || m.cols() < 1) throw DimensionMismatch("empty matrix");
    if (!all_finite(m)) throw ValidationError("matrix has non-finite entries");

    const Eigen::Index rows = m.rows();
    const Eigen::Index cols = m.cols();
    const bool wide = rows <= cols;

    // Work on the tall orientation so the rotated factor is the small one.
    Eigen::MatrixXd a = wide ? Eigen::MatrixXd(m.transpose()) : Eigen::MatrixXd(m);
    const Eigen::Index small_dim = a.cols();
    Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(small_dim, small_dim);
    orthogonalize_columns(a, rot, max_sweeps, tol);

    std::vector<Eigen::Index> order(small_dim);
    std::iota(order.begin(), order.end(), 0);
    Eigen::VectorXd norms(small_dim);
    for (Eigen::Index j = 0; j < small_dim; ++j) norms(j) = a.col(j).norm();
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return norms(x) > norms(y); });

    // Columns with negligible norm have no usable direction; they are filled
    // in by the basis completion below and keep sigma = 0.
    const double rank_tol = norms.size() > 0 ? norms.maxCoeff() * 1e-14 : 0.0;

    Vec sigma(small_dim);
    Eigen::MatrixXd rot_sorted(small_dim, small_dim);
    const Eigen::Index tall_dim = a.rows();
    Eigen::MatrixXd dirs(tall_dim, small_dim);
    Eigen::Index kept = 0;
    for (Eigen::Index j = 0; j < small_dim; ++j) {
        const Eigen::Index src = order[j];
        sigma(j) = norms(src);
        rot_sorted.col(j) = rot.col(src);
        if (norms(src) > rank_tol && norms(src) > 0.0) {
            dirs.col(kept++) = a.col(src) / norms(src);
        } else {
            sigma(j) = 0.0;
        }
    }
    Eigen::MatrixXd dirs_full = complete_basis(dirs.leftCols(kept));

    SvdResult out;
    if (wide) {
        // m = rot_sorted · diag(sigma) · dirsᵀ
        out.u = rot_sorted;
        out.v = dirs_full.transpose();
    } else {
        // m = dirs · diag(sigma) · rot_sortedᵀ
        out.u = dirs_full;
        out.v = rot_sorted.transpose();
    }
    out.sigma = sigma;
    return out;
}

}  // namespace ocnn
