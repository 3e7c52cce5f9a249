#pragma once

#include <cstdint>
#include <random>

#include "nashmoser/graded_space.hpp"

namespace nashmoser {

/// Seeded generator. Uniforms are built from raw 64-bit draws so that a seed
/// reproduces the same stream regardless of the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Shape of randomly drawn elements: |c_k| = u_k (1+|k|)^(-decay), u_k uniform
/// in [0.5, 1], uniform phase.
struct SampleShape {
    double decay = 2.0;
    bool real_valued = true;  // Hermitian symmetric coefficients
    bool mean_free = false;   // c_0 = 0
    int band_limit = 0;       // if > 0, only |k| <= band_limit are populated
};

GradedElement random_element(int order, Rng& rng, const SampleShape& shape);

/// x rescaled so that |x|_n = target. x must be nonzero.
GradedElement scale_to(const GradedElement& x, SeminormIndex n, double target);

}  // namespace nashmoser
