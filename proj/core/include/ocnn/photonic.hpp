#pragma once

#include <string>
#include <vector>

#include "ocnn/linalg.hpp"
#include "ocnn/reck.hpp"
#include "ocnn/svd.hpp"

namespace ocnn {

/// Matrix whose rows are vectorized convolution kernels (or fully connected
/// weight rows). Multiplying it by a patch vector evaluates every
/// kernel-patch dot product at once.
class KernelMatrix {
public:
    explicit KernelMatrix(Mat m);

    int rows() const { return static_cast<int>(m_.rows()); }
    int cols() const { return static_cast<int>(m_.cols()); }
    const Mat& matrix() const { return m_; }

private:
    Mat m_;
};

/// Singular-value factorization of a kernel matrix in mesh-programmable
/// form: square orthogonal u (rows×rows) and v (cols×cols), the diagonal of
/// the rectangular Σ between them, and the extracted phase schedules for
/// both orthogonal factors.
struct KernelFactors {
    int rows = 0;
    int cols = 0;
    Mat u;
    Vec sigma;  // non-increasing, non-negative
    Mat v;
    PhaseSchedule u_schedule;
    PhaseSchedule v_schedule;
};

enum class Nonlinearity { relu, sigmoid, tanh, identity };

Nonlinearity nonlinearity_from_name(const std::string& name);
std::string nonlinearity_name(Nonlinearity nl);
double apply_nonlinearity(Nonlinearity nl, double x);

/// Time-ordered sequence of equal-length real vectors; row t of the backing
/// matrix is the vector fed at timestep t.
class PatchStream {
public:
    PatchStream() : data_(0, 0) {}
    explicit PatchStream(Mat data);

    int size() const { return static_cast<int>(data_.rows()); }
    int length() const { return static_cast<int>(data_.cols()); }
    const Mat& matrix() const { return data_; }
    Eigen::Ref<const Eigen::RowVectorXd> at(int t) const { return data_.row(t); }

private:
    Mat data_;
};

/// Full SVD with phase schedules for both orthogonal factors. Throws
/// ConvergenceFailure if the factorization cannot reach its residual
/// tolerance; the reconstruction u·Σ·v matches the input to < 1e-9 max-abs.
KernelFactors factor_kernel(const KernelMatrix& m);

/// Rebuilds the kernel matrix from noisy phases: both schedules are
/// perturbed with independent streams (σ shared; per-factor seeds derived
/// from noise.seed), the orthogonal factors reconstructed, and u′·Σ·v′
/// assembled. σ = 0 reproduces the original matrix to < 1e-9.
KernelMatrix realize_kernel(const KernelFactors& f, const PhaseNoiseModel& noise);

/// Streams every patch vector through the kernel matrix and applies the
/// nonlinearity to each output port: output[t] = nl(m · stream[t]).
PatchStream apply_layer(const KernelMatrix& m, const PatchStream& stream, Nonlinearity nl);

}  // namespace ocnn
