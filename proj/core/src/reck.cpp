#include "ocnn/reck.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "ocnn/errors.hpp"
#include "ocnn/rng.hpp"

namespace ocnn {

RealOrthogonal::RealOrthogonal(Mat m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1) {
        throw NotOrthogonal("matrix is not square: " + std::to_string(m_.rows()) + "x" +
                            std::to_string(m_.cols()));
    }
    if (!all_finite(m_)) {
        throw NotOrthogonal("matrix has non-finite entries");
    }
    const double defect = orthogonality_defect(m_);
    if (defect > kOrthoTol) {
        throw NotOrthogonal("UtU deviates from identity by " + std::to_string(defect));
    }
}

PhaseSchedule::PhaseSchedule(int n, std::vector<PlanarRotation> thetas, std::vector<int> signs)
    : n_(n), thetas_(std::move(thetas)), signs_(std::move(signs)) {
    if (n_ < 1) throw ValidationError("schedule dimension must be >= 1");
    const std::size_t expected = static_cast<std::size_t>(n_) * (n_ - 1) / 2;
    if (thetas_.size() != expected) {
        throw ValidationError("schedule for n=" + std::to_string(n_) + " needs " +
                              std::to_string(expected) + " angles, got " +
                              std::to_string(thetas_.size()));
    }
    for (const auto& t : thetas_) {
        if (t.i < 0 || t.i >= n_ - 1 || t.j != t.i + 1) {
            throw ValidationError("rotation indices must be an adjacent pair (i, i+1)");
        }
        if (!std::isfinite(t.theta)) throw ValidationError("non-finite rotation angle");
    }
    if (signs_.size() != static_cast<std::size_t>(n_)) {
        throw ValidationError("sign vector length must equal n");
    }
    for (int s : signs_) {
        if (s != 1 && s != -1) throw ValidationError("signs must be +1 or -1");
    }
}

namespace {
// Both pair entries below this magnitude count as already nulled; the
// rotation angle is then 0 instead of an arbitrary arctangent of noise.
constexpr double kDegenerateNullTol = 1e-14;
}  // namespace

PhaseSchedule extract_phases(const RealOrthogonal& u) {
    const int n = u.dim();
    Mat w = u.matrix();

    std::vector<PlanarRotation> thetas;
    thetas.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);

    for (int col = n - 1; col >= 1; --col) {
        for (int row = 0; row < col; ++row) {
            const double a = w(row, col);
            const double b = w(row + 1, col);
            double theta = 0.0;
            if (std::abs(a) >= kDegenerateNullTol || std::abs(b) >= kDegenerateNullTol) {
                theta = std::atan2(-a, b);
            }
            rotate_rows(w, row, row + 1, theta);
            w(row, col) = 0.0;  // nulled analytically; clear the roundoff dust
            thetas.push_back({row, row + 1, theta});
        }
    }

    std::vector<int> signs(n);
    for (int k = 0; k < n; ++k) signs[k] = w(k, k) >= 0.0 ? 1 : -1;

    return PhaseSchedule(n, std::move(thetas), std::move(signs));
}

RealOrthogonal reconstruct_orthogonal(const PhaseSchedule& s) {
    const int n = s.dim();
    Mat m = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k) m(k, k) = static_cast<double>(s.signs()[k]);

    const auto& thetas = s.rotations();
    for (auto it = thetas.rbegin(); it != thetas.rend(); ++it) {
        rotate_rows_transposed(m, it->i, it->j, it->theta);
    }
    return RealOrthogonal(std::move(m));
}

PhaseSchedule perturb_phases(const PhaseSchedule& s, const PhaseNoiseModel& noise) {
    if (noise.sigma < 0.0 || !std::isfinite(noise.sigma)) {
        throw ValidationError("noise sigma must be finite and >= 0");
    }
    NormalSampler normal(noise.seed);
    std::vector<PlanarRotation> perturbed = s.rotations();
    for (auto& t : perturbed) {
        t.theta += noise.sigma * normal();
    }
    return PhaseSchedule(s.dim(), std::move(perturbed), s.signs());
}

}  // namespace ocnn
