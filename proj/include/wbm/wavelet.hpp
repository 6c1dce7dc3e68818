#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wbm {

enum class WaveletName { Db4, Db6, Db8 };
enum class Boundary { Periodic, Symmetric };

/// Orthonormal Daubechies filter pair. Taps are validated on first access:
/// sum(lowpass) = sqrt(2), sum(lowpass^2) = 1, highpass is the alternating-sign
/// reversal of lowpass, and the first `vanishing_moments` discrete moments of
/// the highpass vanish. A table that fails validation aborts construction.
struct WaveletFilter {
    WaveletName name;
    std::vector<double> lowpass;
    std::vector<double> highpass;
    int vanishing_moments;

    std::size_t taps() const { return lowpass.size(); }
    const char* label() const;

    static const WaveletFilter& get(WaveletName name);
    static WaveletName parse(std::string_view text);
};

/// Pyramid filter-bank output. details[l] holds level l+1 (level 1 = finest).
/// transform_length is the length actually decomposed; it equals
/// original_length for periodic boundary and the reflect-padded length for
/// symmetric boundary.
struct DwtDecomposition {
    WaveletFilter filter;
    int levels = 0;
    std::vector<double> approx;
    std::vector<std::vector<double>> details;
    Boundary boundary = Boundary::Periodic;
    std::size_t original_length = 0;
    std::size_t transform_length = 0;

    std::size_t coefficient_count() const;
};

DwtDecomposition dwt_forward(std::span<const double> signal,
                             const WaveletFilter& filter, int levels,
                             Boundary boundary = Boundary::Periodic);

std::vector<double> dwt_inverse(const DwtDecomposition& decomp);

/// Scale-j trend: decompose to level j, zero all detail bands, invert, and
/// truncate back to the input length. Non-multiple-of-2^j inputs are extended
/// by symmetric reflection before the periodic bank is applied.
std::vector<double> lowpass_trend(std::span<const double> signal,
                                  const WaveletFilter& filter, int level);

}  // namespace wbm
