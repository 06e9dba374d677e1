#pragma once

#include <cmath>
#include <cstdint>

namespace pprobe {

// Deterministic 64-bit stream (splitmix64). All randomized machinery in the
// toolkit derives from this so that runs are reproducible bit-for-bit.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0,1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    // uniform in [a,b)
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    // standard normal (Box-Muller, consumes two uniforms)
    double gaussian() {
        double u1 = uniform(), u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }
};

// Combines a campaign seed with an item index (or an encoded wavevector)
// into an independent per-item seed.
inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
    SplitMix64 s(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    s.next();
    return s.next();
}

// Halton low-discrepancy sequence, index >= 0.
inline double halton(uint64_t index, uint32_t base) {
    double f = 1.0, r = 0.0;
    uint64_t i = index + 1;  // skip the zero point
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

}  // namespace pprobe
