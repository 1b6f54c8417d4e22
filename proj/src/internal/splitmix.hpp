#ifndef IRKA_LAB_INTERNAL_SPLITMIX_HPP
#define IRKA_LAB_INTERNAL_SPLITMIX_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace irka_lab::internal {

// splitmix64 with explicit arithmetic so seeded output is identical on every
// platform (std:: distributions are implementation-defined)
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// uniform on [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// standard normal (Box-Muller, one value per call)
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace irka_lab::internal

#endif  // IRKA_LAB_INTERNAL_SPLITMIX_HPP
