#pragma once

#include <cstdint>
#include <vector>

#include "ocnn/linalg.hpp"

namespace ocnn {

/// Square real matrix with UᵀU = I, verified at construction.
class RealOrthogonal {
public:
    static constexpr double kOrthoTol = 1e-9;

    /// Throws NotOrthogonal if entries are non-finite or UᵀU deviates from
    /// the identity by more than kOrthoTol in any entry.
    explicit RealOrthogonal(Mat m);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Mat& matrix() const { return m_; }

private:
    Mat m_;
};

/// One planar rotation acting on the adjacent channel pair (i, i+1),
/// 0-indexed. Stored in application order.
struct PlanarRotation {
    int i = 0;
    int j = 0;  // always i + 1
    double theta = 0.0;
};

/// Complete mesh program for one n×n real orthogonal matrix: n(n−1)/2
/// planar-rotation angles plus a ±1 diagonal.
///
/// Angle order is the extraction order: columns swept right to left, each
/// column nulled top to bottom. Reconstruction applies the transposed
/// rotations in exact reverse order. This ordering is part of the
/// serialized format.
class PhaseSchedule {
public:
    PhaseSchedule(int n, std::vector<PlanarRotation> thetas, std::vector<int> signs);

    int dim() const { return n_; }
    const std::vector<PlanarRotation>& rotations() const { return thetas_; }
    const std::vector<int>& signs() const { return signs_; }

private:
    int n_;
    std::vector<PlanarRotation> thetas_;
    std::vector<int> signs_;
};

/// Additive Gaussian phase noise: each angle receives an independent
/// N(0, sigma²) offset. Deterministic given the seed.
struct PhaseNoiseModel {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

/// Computes the planar-rotation program that diagonalizes `u`.
///
/// Rotations null the above-diagonal entries column by column starting from
/// the far-right column and moving down each column; the ±1 diagonal left
/// over after all n(n−1)/2 rotations becomes the sign vector. When both
/// entries of a target pair are already below 1e-14 the angle is 0; the
/// generic angle is the two-argument arctangent of (−u[r][c], u[r+1][c]).
PhaseSchedule extract_phases(const RealOrthogonal& u);

/// Rebuilds the orthogonal matrix programmed by `s`: the product of
/// transposed rotations in reverse application order, applied to the sign
/// diagonal. The result is orthogonal for any angle values.
RealOrthogonal reconstruct_orthogonal(const PhaseSchedule& s);

/// Returns a copy of `s` with Gaussian noise added to every angle. Signs
/// are unchanged. Throws ValidationError if noise.sigma < 0.
PhaseSchedule perturb_phases(const PhaseSchedule& s, const PhaseNoiseModel& noise);

}  // namespace ocnn
