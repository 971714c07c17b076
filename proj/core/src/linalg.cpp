#include "ocnn/linalg.hpp"

#include <cmath>

namespace ocnn {

double max_abs(const Mat& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

double orthogonality_defect(const Mat& m) {
    Mat gram = m.transpose() * m;
    gram.diagonal().array() -= 1.0;
    return max_abs(gram);
}

bool all_finite(const Mat& m) { return m.allFinite(); }

void rotate_rows(Mat& m, int i, int j, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    double* ri = m.data() + static_cast<std::ptrdiff_t>(i) * m.cols();
    double* rj = m.data() + static_cast<std::ptrdiff_t>(j) * m.cols();
    const Eigen::Index n = m.cols();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double a = ri[k];
        const double b = rj[k];
        ri[k] = c * a + s * b;
        rj[k] = -s * a + c * b;
    }
}

void rotate_rows_transposed(Mat& m, int i, int j, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    double* ri = m.data() + static_cast<std::ptrdiff_t>(i) * m.cols();
    double* rj = m.data() + static_cast<std::ptrdiff_t>(j) * m.cols();
    const Eigen::Index n = m.cols();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double a = ri[k];
        const double b = rj[k];
        ri[k] = c * a - s * b;
        rj[k] = s * a + c * b;
    }
}

}  // namespace ocnn
