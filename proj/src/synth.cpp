#include "wbm/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace wbm {

namespace {

// Uniform in [0,1) from the top 53 bits of one engine word. mt19937_64 output
// is pinned down by the standard, so streams match across platforms; the
// library's normal_distribution is not, hence the hand-rolled Box-Muller.
double unit_uniform(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1p-53;
}

}  // namespace

std::vector<double> binomial_cascade(const CascadeSpec& spec) {
    if (!(spec.multiplier > 0.5) || !(spec.multiplier < 1.0))
        throw std::invalid_argument("cascade multiplier must lie in (0.5, 1)");
    if (spec.levels < 8 || spec.levels > 24)
        throw std::invalid_argument("cascade levels must lie in [8, 24]");

    std::mt19937_64 eng(spec.seed);
    const double a = spec.multiplier;

    std::vector<double> mass{1.0};
    std::vector<double> next;
    for (int lv = 0; lv < spec.levels; ++lv) {
        next.resize(mass.size() * 2);
        for (std::size_t i = 0; i < mass.size(); ++i) {
            const bool left_heavy = (eng() & 1u) != 0;  // one draw per split
            next[2 * i] = mass[i] * (left_heavy ? a : 1.0 - a);
            next[2 * i + 1] = mass[i] * (left_heavy ? 1.0 - a : a);
        }
        mass.swap(next);
    }
    return mass;
}

std::vector<double> gaussian_walk(std::size_t length, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::vector<double> out(length);
    for (std::size_t i = 0; i < length; i += 2) {
        double u1 = unit_uniform(eng);
        while (u1 <= 0.0) u1 = unit_uniform(eng);
        const double u2 = unit_uniform(eng);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        out[i] = radius * std::cos(angle);
        if (i + 1 < length) out[i + 1] = radius * std::sin(angle);
    }
    return out;
}

}  // namespace wbm
