#pragma once

#include <cstdint>
#include <random>

namespace orbdet {

/// Gaussian source: std::mt19937_64 feeding 53-bit uniforms into Box-Muller.
/// Sequences are identical across standard libraries.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1).
    double uniform();

    /// Standard normal.
    double normal();

    double normal(double sigma) { return sigma * normal(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// SplitMix64 mixing, used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace orbdet
