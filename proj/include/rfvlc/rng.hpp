#pragma once
#include <cmath>
#include <cstdint>

namespace rfvlc {

// Deterministic counter-friendly generator (splitmix64 core). Streams are
// derived by hashing a seed with integer keys, so draws for one network
// element never depend on how many elements were generated before it.
// This keeps channel tensors bit-identical between serial and OpenMP builds.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Derive an independent stream from (seed, tag, indices...).
    template <typename... Keys>
    static Rng keyed(std::uint64_t seed, std::uint64_t tag, Keys... keys) {
        Rng r(seed ^ (tag * 0x9e3779b97f4a7c15ULL));
        (r.absorb(static_cast<std::uint64_t>(keys)), ...);
        return r;
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; consumes two uniforms per call.
    double normal(double mean, double stddev) {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        double mag = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * mag * std::cos(2.0 * kRngPi * u2);
    }

    // Unit-mean exponential via inversion.
    double exponential() {
        double u = uniform();
        if (u > 1.0 - 1e-16) u = 1.0 - 1e-16;
        return -std::log(1.0 - u);
    }

private:
    static constexpr double kRngPi = 3.141592653589793238462643383279502884;

    void absorb(std::uint64_t k) {
        state_ ^= k + 0x9e3779b97f4a7c15ULL + (state_ << 6) + (state_ >> 2);
        next_u64();
    }

    std::uint64_t state_;
};

// Stream tags; one per independent random effect.
enum RngTag : std::uint64_t {
    kTagTopology = 1,
    kTagRfLargeScale = 2,  // shadowing + penetration, per (ap, user)
    kTagRfFading = 3,      // per (ap, user, subchannel)
    kTagLosProb = 4,       // per (vlc ap, user, subchannel)
};

} // namespace rfvlc
