#pragma once

#include <cstdint>
#include <vector>

#include "ocnn/cnn.hpp"
#include "ocnn/idx.hpp"
#include "ocnn/train.hpp"

namespace ocnn {

struct SweepConfig {
    std::vector<double> sigmas;
    int trials = 20;
    std::uint64_t seed = 0;
    int subset = 1000;  // images per evaluation; 0 = whole test set
    int threads = 0;    // 0 = hardware concurrency
};

struct AgreementRow {
    double sigma = 0.0;
    int trial = 0;
    double agreement = 0.0;
};

/// `count` points spaced uniformly in log10 between lo and hi inclusive.
std::vector<double> log_spaced(double lo, double hi, int count);

/// The default sweep grid: 20 log-spaced points in [1e-5, 0.3].
std::vector<double> default_sweep_sigmas();

/// Phase-noise agreement experiment. Every layer matrix is factored once;
/// each (sigma, trial) cell perturbs both phase schedules of every layer
/// with its own derived seed, realizes the noisy kernel matrices, classifies
/// the test subset, and reports the fraction of images whose prediction
/// matches the unperturbed network (ties must match exactly). Rows are
/// ordered by (sigma, trial) and independent of the thread count.
std::vector<AgreementRow> perturbation_experiment(const NetworkSpec& net,
                                                  const std::vector<KernelMatrix>& weights,
                                                  const Dataset& test, const SweepConfig& cfg);

}  // namespace ocnn
