#include "ocnn/photonic.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "ocnn/errors.hpp"
#include "ocnn/rng.hpp"

namespace ocnn {

KernelMatrix::KernelMatrix(Mat m) : m_(std::move(m)) {
    if (m_.rows() < 1 || m_.cols() < 1) {
        throw DimensionMismatch("kernel matrix dimensions must be >= 1");
    }
    if (!all_finite(m_)) throw ValidationError("kernel matrix has non-finite entries");
}

Nonlinearity nonlinearity_from_name(const std::string& name) {
    if (name == "relu") return Nonlinearity::relu;
    if (name == "sigmoid") return Nonlinearity::sigmoid;
    if (name == "tanh") return Nonlinearity::tanh;
    if (name == "identity") return Nonlinearity::identity;
    throw ValidationError("unknown nonlinearity: " + name);
}

std::string nonlinearity_name(Nonlinearity nl) {
    switch (nl) {
        case Nonlinearity::relu: return "relu";
        case Nonlinearity::sigmoid: return "sigmoid";
        case Nonlinearity::tanh: return "tanh";
        case Nonlinearity::identity: return "identity";
    }
    throw ValidationError("unknown nonlinearity enum value");
}

double apply_nonlinearity(Nonlinearity nl, double x) {
    switch (nl) {
        case Nonlinearity::relu: return x > 0.0 ? x : 0.0;
        case Nonlinearity::sigmoid: return 1.0 / (1.0 + std::exp(-x));
        case Nonlinearity::tanh: return std::tanh(x);
        case Nonlinearity::identity: return x;
    }
    throw ValidationError("unknown nonlinearity enum value");
}

PatchStream::PatchStream(Mat data) : data_(std::move(data)) {
    if (!all_finite(data_)) throw ValidationError("patch stream has non-finite entries");
}

KernelFactors factor_kernel(const KernelMatrix& m) {
    SvdResult svd = jacobi_svd(m.matrix());

    const double residual = max_abs(Mat(svd.compose() - m.matrix()));
    if (residual >= 1e-9) {
        throw ConvergenceFailure("factorization residual " + std::to_string(residual) +
                                 " exceeds 1e-9");
    }

    PhaseSchedule u_schedule = extract_phases(RealOrthogonal(svd.u));
    PhaseSchedule v_schedule = extract_phases(RealOrthogonal(svd.v));
    return KernelFactors{m.rows(),          m.cols(),
                         std::move(svd.u),  std::move(svd.sigma),
                         std::move(svd.v),  std::move(u_schedule),
                         std::move(v_schedule)};
}

KernelMatrix realize_kernel(const KernelFactors& f, const PhaseNoiseModel& noise) {
    const PhaseNoiseModel u_noise{noise.sigma, derive_seed(noise.seed, 0)};
    const PhaseNoiseModel v_noise{noise.sigma, derive_seed(noise.seed, 1)};

    const RealOrthogonal u = reconstruct_orthogonal(perturb_phases(f.u_schedule, u_noise));
    const RealOrthogonal v = reconstruct_orthogonal(perturb_phases(f.v_schedule, v_noise));

    // u · Σ · v with the rectangular diagonal folded in as column scaling.
    const Eigen::Index inner = f.sigma.size();
    Mat scaled = u.matrix().leftCols(inner);
    for (Eigen::Index j = 0; j < inner; ++j) scaled.col(j) *= f.sigma(j);
    return KernelMatrix(scaled * v.matrix().topRows(inner));
}

PatchStream apply_layer(const KernelMatrix& m, const PatchStream& stream, Nonlinearity nl) {
    if (stream.length() != m.cols()) {
        throw DimensionMismatch("patch length " + std::to_string(stream.length()) +
                                " does not match kernel matrix columns " +
                                std::to_string(m.cols()));
    }
    Mat out = stream.matrix() * m.matrix().transpose();
    if (nl != Nonlinearity::identity) {
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
            for (Eigen::Index j = 0; j < out.cols(); ++j) {
                out(i, j) = apply_nonlinearity(nl, out(i, j));
            }
        }
    }
    return PatchStream(std::move(out));
}

}  // namespace ocnn
