#pragma once

#include <cstdint>
#include <limits>
#include <cmath>
#include <random>

namespace qcorr {

// splitmix64 finalizer, used to whiten seed material before it reaches the engine.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic stream id for (master seed, history, channel, member).
// Distinct tuples give decorrelated engine seeds, so trajectories can be
// generated in any order or on any thread and still reproduce bit-identically.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t history,
                                 std::uint64_t channel, std::uint64_t member = 0) {
    std::uint64_t s = mix64(master);
    s = mix64(s ^ history);
    s = mix64(s ^ channel);
    s = mix64(s ^ member);
    return s;
}

// mt19937_64 with hand-rolled variate transforms. std::*_distribution is not
// bit-portable across standard libraries; these transforms are.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // exponential waiting time; rate <= 0 never fires
    double exponential(double rate) {
        if (rate <= 0.0) return std::numeric_limits<double>::infinity();
        return -std::log1p(-uniform()) / rate;
    }

    // fair +/-1
    int sign() { return (gen_() & 1ULL) ? 1 : -1; }

    // standard normal (Box-Muller)
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace qcorr
