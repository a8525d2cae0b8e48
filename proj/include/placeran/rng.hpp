// Seeded RNG helpers with fully specified draw semantics.  The standard
// distributions are implementation-defined, which would break the
// byte-identical-output contract of the generators, so the few draws we
// need are implemented directly on top of mt19937_64.

#pragma once

#include <cstdint>
#include <random>

namespace placeran {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi].
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace placeran
