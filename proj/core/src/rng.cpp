#include "ocnn/rng.hpp"

#include <cmath>
#include <numbers>

namespace ocnn {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k) {
    return splitmix64(master + (k + 1) * 0x9E3779B97F4A7C15ULL);
}

double NormalSampler::uniform01() {
    // 53-bit mantissa in [0, 1), flipped to (0, 1] so log() is safe.
    return 1.0 - static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double NormalSampler::operator()() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

}  // namespace ocnn
