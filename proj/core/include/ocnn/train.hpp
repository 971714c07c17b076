#pragma once

#include <cstdint>
#include <vector>

#include "ocnn/cnn.hpp"
#include "ocnn/idx.hpp"

namespace ocnn {

struct TrainConfig {
    int epochs = 10;
    int batch_size = 128;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
    int subset = 0;             // 0 = full training set
    double min_accuracy = 0.0;  // > 0 enables the NonConvergence check against eval
};

struct TrainResult {
    std::vector<KernelMatrix> weights;
    double initial_loss = 0.0;
    std::vector<double> epoch_losses;  // mean cross-entropy per epoch
    double eval_accuracy = -1.0;       // -1 when no eval set was given
};

/// Seeded He-normal weight initialization for every layer of `net`.
std::vector<KernelMatrix> init_weights(const NetworkSpec& net, std::uint64_t seed);

/// Trains the network with Adam on softmax cross-entropy. Deterministic for
/// a fixed (seed, config, dataset) triple on one platform. Throws
/// NonConvergence if min_accuracy > 0 and the eval accuracy after the final
/// epoch falls short.
TrainResult train_reference(const NetworkSpec& net, const Dataset& train, const Dataset* eval,
                            const TrainConfig& cfg);

/// Batched forward pass over dataset rows `indices`; returns one score row
/// per index.
Mat forward_scores(const NetworkSpec& net, const std::vector<KernelMatrix>& weights,
                   const Dataset& data, const std::vector<int>& indices);

/// Fraction of the first `limit` images (0 = all) whose lowest-index argmax
/// matches the label.
double evaluate_accuracy(const NetworkSpec& net, const std::vector<KernelMatrix>& weights,
                         const Dataset& data, int limit = 0);

}  // namespace ocnn
