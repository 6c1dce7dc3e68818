#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace wbm {

/// Deterministic multiplicative cascade. Length is 2^levels; the multiplier
/// must lie in (0.5, 1), a = 0.5 degenerates to the uniform measure.
struct CascadeSpec {
    double multiplier = 0.75;
    int levels = 12;
    std::uint64_t seed = 1;
};

/// Finest-level mass sequence of the binomial cascade: total mass 1 is split
/// recursively, fraction a to one half per split, the side chosen by one
/// seeded coin flip per node. All values are strictly positive and sum to 1.
std::vector<double> binomial_cascade(const CascadeSpec& spec);

/// Seeded i.i.d. standard normal increments (Box-Muller over mt19937_64
/// uniforms, so the stream is identical on every platform).
std::vector<double> gaussian_walk(std::size_t length, std::uint64_t seed);

}  // namespace wbm
