#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace hardylab {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

/// Deterministic random stream.  Distributions are hand-rolled on top of
/// mt19937_64 so that a (seed, label) pair reproduces bit-identical draws
/// regardless of the standard library in use.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }

    /// uniform in [0,1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// uniform integer in [0, n)
    std::uint64_t index(std::uint64_t n) { return gen_() % n; }

    int sign() { return (gen_() & 1) ? 1 : -1; }

    /// standard normal via Box-Muller (cached pair)
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Splits a master seed into an independent stream identified by a stable
/// label (module name, trial index, ...).  Used everywhere parallel trials
/// need reproducible per-task randomness.
inline Rng derive_rng(std::uint64_t master, std::string_view label) {
    return Rng(detail::splitmix64(master ^ detail::fnv1a(label)));
}

inline Rng derive_rng(std::uint64_t master, std::string_view label, std::uint64_t index) {
    return Rng(detail::splitmix64(detail::splitmix64(master ^ detail::fnv1a(label)) + index));
}

}  // namespace hardylab
