#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qjump {

// splitmix64; used to derive independent per-trajectory seeds from
// (master_seed, trajectory_index) so ensembles are parallel-reproducible.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t master_seed, uint64_t index) {
    return splitmix64(master_seed ^ splitmix64(index + 1));
}

// Deterministic uniform/gaussian draws on top of the (standard-pinned)
// mt19937_64 stream. std::uniform_real_distribution is not bit-portable,
// so the mapping to doubles is done by hand.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    // uniform on [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // standard normal, Box-Muller (two uniforms per pair, cached partner)
    double gauss() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double c = std::cos(2.0 * M_PI * u2), s = std::sin(2.0 * M_PI * u2);
        cached_ = r * s;
        have_cached_ = true;
        return r * c;
    }

    uint64_t raw() { return eng_(); }

  private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace qjump
