#pragma once

#include <cstdint>
#include <random>

namespace ocnn {

/// splitmix64 output function (Steele, Lea, Flood 2014). Used to derive
/// independent child seeds from one master seed.
std::uint64_t splitmix64(std::uint64_t x);

/// k-th child seed of `master` (k = 0, 1, …); distinct streams per k.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k);

/// Deterministic N(0,1) sampler: mt19937_64 + Box–Muller. Kept in-house so
/// perturbation streams are reproducible independent of the standard
/// library's normal_distribution implementation.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

    double operator()();

private:
    double uniform01();  // in (0, 1]

    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace ocnn
