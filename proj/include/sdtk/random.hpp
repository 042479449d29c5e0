#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace sdtk {

/// Seeded generator with portable uniform and normal draws. std::*_distribution output is
/// implementation-defined, so fixtures draw from the raw engine instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
    double normal() {
        // Box-Muller; u1 in (0, 1] keeps the log finite.
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace sdtk
