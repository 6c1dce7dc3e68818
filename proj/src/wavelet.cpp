#include "wbm/wavelet.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace wbm {

namespace {

// Deepest level / padded length guard; keeps reflect-padding from exploding.
constexpr int kMaxLevels = 24;

std::vector<double> quadrature_mirror(const std::vector<double>& lowpass) {
    const std::size_t n = lowpass.size();
    std::vector<double> highpass(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double tap = lowpass[n - 1 - k];
        highpass[k] = (k % 2 == 0) ? tap : -tap;
    }
    return highpass;
}

void validate_filter(const WaveletFilter& f) {
    double sum = 0.0, sumsq = 0.0;
    for (double h : f.lowpass) {
        sum += h;
        sumsq += h * h;
    }
    if (std::abs(sum - std::sqrt(2.0)) > 1e-10)
        throw std::logic_error("wavelet filter: sum(lowpass) != sqrt(2)");
    if (std::abs(sumsq - 1.0) > 1e-10)
        throw std::logic_error("wavelet filter: sum(lowpass^2) != 1");
    for (int p = 0; p < f.vanishing_moments; ++p) {
        double moment = 0.0;
        for (std::size_t k = 0; k < f.highpass.size(); ++k)
            moment += f.highpass[k] * std::pow(static_cast<double>(k), p);
        if (std::abs(moment) > 1e-8)
            throw std::logic_error("wavelet filter: highpass moment " +
                                   std::to_string(p) + " does not vanish");
    }
}

WaveletFilter make_filter(WaveletName name) {
    WaveletFilter f;
    f.name = name;
    switch (name) {
        case WaveletName::Db4: {
            const double s3 = std::sqrt(3.0);
            const double s2 = std::sqrt(2.0);
            f.lowpass = {(1.0 + s3) / (4.0 * s2), (3.0 + s3) / (4.0 * s2),
                         (3.0 - s3) / (4.0 * s2), (1.0 - s3) / (4.0 * s2)};
            f.vanishing_moments = 2;
            break;
        }
        case WaveletName::Db6:
            f.lowpass = {0.3326705529509569,   0.8068915093133388,
                         0.4598775021193313,   -0.13501102001039084,
                         -0.08544127388224149, 0.035226291882100656};
            f.vanishing_moments = 3;
            break;
        case WaveletName::Db8:
            f.lowpass = {0.23037781330885523,  0.7148465705525415,
                         0.6308807679295904,   -0.02798376941698385,
                         -0.18703481171888114, 0.030841381835986965,
                         0.032883011666982945, -0.010597401784997278};
            f.vanishing_moments = 4;
            break;
    }
    f.highpass = quadrature_mirror(f.lowpass);
    validate_filter(f);
    return f;
}

// One analysis split: circular correlation with both filters, downsampled by 2.
void split_periodic(const std::vector<double>& x, const WaveletFilter& f,
                    std::vector<double>& approx, std::vector<double>& detail) {
    const std::size_t n = x.size();
    const std::size_t half = n / 2;
    const std::size_t taps = f.taps();
    approx.assign(half, 0.0);
    detail.assign(half, 0.0);
    for (std::size_t i = 0; i < half; ++i) {
        double a = 0.0, d = 0.0;
        for (std::size_t k = 0; k < taps; ++k) {
            const double v = x[(2 * i + k) % n];
            a += v * f.lowpass[k];
            d += v * f.highpass[k];
        }
        approx[i] = a;
        detail[i] = d;
    }
}

// Adjoint of split_periodic; orthonormality makes it the exact inverse.
std::vector<double> merge_periodic(const std::vector<double>& approx,
                                   const std::vector<double>& detail,
                                   const WaveletFilter& f) {
    const std::size_t half = approx.size();
    const std::size_t n = 2 * half;
    const std::size_t taps = f.taps();
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < half; ++i) {
        for (std::size_t k = 0; k < taps; ++k) {
            x[(2 * i + k) % n] += approx[i] * f.lowpass[k] + detail[i] * f.highpass[k];
        }
    }
    return x;
}

// Half-sample symmetric extension: [a b c] -> ... a a b c c b a a b ...
std::size_t reflect_index(std::size_t t, std::size_t n) {
    const std::size_t period = 2 * n;
    const std::size_t m = t % period;
    return m < n ? m : period - 1 - m;
}

std::vector<double> reflect_pad(std::span<const double> signal, std::size_t target) {
    std::vector<double> padded(target);
    for (std::size_t t = 0; t < target; ++t)
        padded[t] = signal[reflect_index(t, signal.size())];
    return padded;
}

std::size_t next_multiple(std::size_t n, std::size_t block) {
    return ((n + block - 1) / block) * block;
}

}  // namespace

const char* WaveletFilter::label() const {
    switch (name) {
        case WaveletName::Db4: return "db4";
        case WaveletName::Db6: return "db6";
        case WaveletName::Db8: return "db8";
    }
    return "?";
}

const WaveletFilter& WaveletFilter::get(WaveletName name) {
    static const WaveletFilter db4 = make_filter(WaveletName::Db4);
    static const WaveletFilter db6 = make_filter(WaveletName::Db6);
    static const WaveletFilter db8 = make_filter(WaveletName::Db8);
    switch (name) {
        case WaveletName::Db4: return db4;
        case WaveletName::Db6: return db6;
        case WaveletName::Db8: return db8;
    }
    std::abort();
}

WaveletName WaveletFilter::parse(std::string_view text) {
    if (text == "db4" || text == "Db4") return WaveletName::Db4;
    if (text == "db6" || text == "Db6") return WaveletName::Db6;
    if (text == "db8" || text == "Db8") return WaveletName::Db8;
    throw std::invalid_argument("unknown wavelet filter: " + std::string(text));
}

std::size_t DwtDecomposition::coefficient_count() const {
    std::size_t count = approx.size();
    for (const auto& d : details) count += d.size();
    return count;
}

DwtDecomposition dwt_forward(std::span<const double> signal,
                             const WaveletFilter& filter, int levels,
                             Boundary boundary) {
    if (levels < 1 || levels > kMaxLevels)
        throw std::invalid_argument("dwt: level count must be in [1, " +
                                    std::to_string(kMaxLevels) + "]");
    if (signal.size() < filter.taps())
        throw std::invalid_argument("dwt: signal shorter than filter (" +
                                    std::to_string(signal.size()) + " < " +
                                    std::to_string(filter.taps()) + ")");
    const std::size_t block = std::size_t{1} << levels;

    std::vector<double> current;
    if (boundary == Boundary::Periodic) {
        if (signal.size() % block != 0)
            throw std::invalid_argument(
                "dwt: periodic boundary needs length divisible by 2^levels");
        current.assign(signal.begin(), signal.end());
    } else {
        current = reflect_pad(signal, next_multiple(signal.size(), block));
    }

    DwtDecomposition decomp;
    decomp.filter = filter;
    decomp.levels = levels;
    decomp.boundary = boundary;
    decomp.original_length = signal.size();
    decomp.transform_length = current.size();
    decomp.details.reserve(static_cast<std::size_t>(levels));

    std::vector<double> approx, detail;
    for (int level = 1; level <= levels; ++level) {
        split_periodic(current, filter, approx, detail);
        decomp.details.push_back(detail);
        current = approx;
    }
    decomp.approx = std::move(current);
    return decomp;
}

std::vector<double> dwt_inverse(const DwtDecomposition& decomp) {
    if (decomp.levels < 1 || decomp.details.size() != static_cast<std::size_t>(decomp.levels))
        throw std::invalid_argument("dwt_inverse: malformed decomposition");
    std::size_t expect = decomp.transform_length >> decomp.levels;
    if (decomp.approx.size() != expect)
        throw std::invalid_argument("dwt_inverse: approximation length mismatch");
    for (int level = decomp.levels; level >= 1; --level) {
        const auto& detail = decomp.details[static_cast<std::size_t>(level - 1)];
        if (detail.size() != expect)
            throw std::invalid_argument("dwt_inverse: detail length mismatch at level " +
                                        std::to_string(level));
        expect *= 2;
    }

    std::vector<double> current = decomp.approx;
    for (int level = decomp.levels; level >= 1; --level) {
        current = merge_periodic(current, decomp.details[static_cast<std::size_t>(level - 1)],
                                 decomp.filter);
    }
    current.resize(decomp.original_length);
    return current;
}

std::vector<double> lowpass_trend(std::span<const double> signal,
                                  const WaveletFilter& filter, int level) {
    DwtDecomposition decomp = dwt_forward(signal, filter, level, Boundary::Symmetric);
    for (auto& detail : decomp.details)
        detail.assign(detail.size(), 0.0);
    return dwt_inverse(decomp);
}

}  // namespace wbm
