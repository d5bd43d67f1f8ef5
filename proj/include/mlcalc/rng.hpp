#ifndef MLCALC_RNG_HPP
#define MLCALC_RNG_HPP

#include <cmath>
#include <cstdint>

namespace mlcalc {

/// Counter-based uniform stream: every value is a pure function of
/// (seed, sample, draw), so parallel generation order cannot change results.
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t sample, std::uint64_t draw) {
    std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = splitmix64(h ^ sample);
    h = splitmix64(h ^ (draw * 0x9e3779b97f4a7c15ULL));
    return h;
}

/// Uniform on the open interval (0,1).
inline double uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t draw) {
    return (static_cast<double>(mix(seed, sample, draw) >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal pair via Box-Muller from draws (2j, 2j+1).
inline void normal_pair(std::uint64_t seed, std::uint64_t sample, std::uint64_t draw,
                        double& n0, double& n1) {
    double u1 = uniform(seed, sample, draw);
    double u2 = uniform(seed, sample, draw + 1);
    double r = std::sqrt(-2.0 * std::log(u1));
    n0 = r * std::cos(6.28318530717958647692 * u2);
    n1 = r * std::sin(6.28318530717958647692 * u2);
}

} // namespace rng

} // namespace mlcalc

#endif
