#include "wbm/mfdfa.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>

namespace wbm {

AnalysisConfig AnalysisConfig::defaults() {
    AnalysisConfig config;
    config.r_grid.reserve(21);
    for (int k = -10; k <= 10; ++k) config.r_grid.push_back(0.5 * k);
    return config;
}

void AnalysisConfig::validate() const {
    if (r_grid.size() < 2)
        throw std::invalid_argument("r grid needs at least two orders");
    for (std::size_t i = 1; i < r_grid.size(); ++i)
        if (!(r_grid[i] > r_grid[i - 1]))
            throw std::invalid_argument("r grid must be strictly increasing");
    if (std::find(r_grid.begin(), r_grid.end(), 2.0) == r_grid.end())
        throw std::invalid_argument("r grid must contain r = 2 (Hurst exponent)");
    if (min_level < 1 || min_level > 24)
        throw std::invalid_argument("min_level must lie in [1, 24]");
    if (max_level != 0) {
        if (max_level > 24) throw std::invalid_argument("max_level must not exceed 24");
        if (max_level <= min_level)
            throw std::invalid_argument("max_level must exceed min_level");
    }
    if (!(eps_floor > 0.0))
        throw std::invalid_argument("eps_floor must be positive");
}

int AnalysisConfig::resolve_max_level(std::size_t n) const {
    if (max_level != 0) return max_level;
    int j = 0;
    while (j < 24 && (std::size_t{2} << j) <= n / 4) ++j;  // largest j with 2^j <= n/4
    return j;
}

std::vector<double> LevelFluctuations::averaged_level(int j) const {
    const auto& f = forward.at(static_cast<std::size_t>(j - min_level));
    const auto& g = mirrored.at(static_cast<std::size_t>(j - min_level));
    std::vector<double> avg(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) avg[i] = 0.5 * (f[i] + g[i]);
    return avg;
}

LevelFluctuations extract_fluctuations(const Profile& profile, const AnalysisConfig& config) {
    config.validate();
    const auto& y = profile.values;
    const std::size_t n = y.size();
    const std::size_t need = (std::size_t{1} << config.min_level) * 4;
    if (n < need)
        throw ProfileTooShortError(profile.id, n,
                                   std::to_string(need) + " samples for the minimum level");
    const int jmax = config.resolve_max_level(n);
    if ((std::size_t{1} << jmax) > n)
        throw ProfileTooShortError(profile.id, n,
                                   "window " + std::to_string(std::size_t{1} << jmax) +
                                       " for the top level");

    const WaveletFilter filt = WaveletFilter::get(config.filter);
    std::vector<double> rev(y.rbegin(), y.rend());

    LevelFluctuations out;
    out.id = profile.id;
    out.min_level = config.min_level;
    for (int j = config.min_level; j <= jmax; ++j) {
        std::vector<double> trend = lowpass_trend(y, filt, j);
        for (std::size_t i = 0; i < n; ++i) trend[i] = y[i] - trend[i];
        out.forward.push_back(std::move(trend));

        std::vector<double> rtrend = lowpass_trend(rev, filt, j);
        for (std::size_t i = 0; i < n; ++i) rtrend[i] = rev[i] - rtrend[i];
        std::reverse(rtrend.begin(), rtrend.end());  // re-align with forward time
        out.mirrored.push_back(std::move(rtrend));
    }
    return out;
}

namespace {

// Mean square of a[start .. start+w).
double segment_mean_square(const std::vector<double>& a, std::size_t start, std::size_t w) {
    double acc = 0.0;
    for (std::size_t i = start; i < start + w; ++i) acc += a[i] * a[i];
    return acc / static_cast<double>(w);
}

}  // namespace

FluctuationTable fluctuation_function(const LevelFluctuations& fluct,
                                      const AnalysisConfig& config) {
    config.validate();
    if (fluct.forward.empty() || fluct.forward.size() != fluct.mirrored.size())
        throw std::invalid_argument("fluctuation arrays missing or mismatched");

    const std::size_t n = fluct.forward.front().size();
    FluctuationTable table;
    table.id = fluct.id;
    table.orders = config.r_grid;
    for (int j = fluct.min_level; j <= fluct.max_level(); ++j)
        table.windows.push_back(1 << j);
    table.values.assign(table.orders.size(), std::vector<double>(table.windows.size(), 0.0));
    table.dropped_segments.assign(table.orders.size(),
                                  std::vector<int>(table.windows.size(), 0));

    std::vector<double> squares;
    for (std::size_t wi = 0; wi < table.windows.size(); ++wi) {
        const std::size_t w = static_cast<std::size_t>(table.windows[wi]);
        const std::size_t mw = n / w;
        squares.clear();
        squares.reserve(2 * mw);

        // 2 M_w segments: M_w from the front, M_w from the back.
        if (config.average_squares) {
            const auto& f = fluct.forward[wi];
            const auto& g = fluct.mirrored[wi];
            for (std::size_t m = 0; m < mw; ++m)
                squares.push_back(0.5 * (segment_mean_square(f, m * w, w) +
                                         segment_mean_square(g, m * w, w)));
            for (std::size_t m = 0; m < mw; ++m) {
                const std::size_t start = n - (m + 1) * w;
                squares.push_back(0.5 * (segment_mean_square(f, start, w) +
                                         segment_mean_square(g, start, w)));
            }
        } else {
            const std::vector<double> avg = fluct.averaged_level(fluct.min_level +
                                                                 static_cast<int>(wi));
            for (std::size_t m = 0; m < mw; ++m)
                squares.push_back(segment_mean_square(avg, m * w, w));
            for (std::size_t m = 0; m < mw; ++m)
                squares.push_back(segment_mean_square(avg, n - (m + 1) * w, w));
        }

        // Sub-floor segments are excluded from every order at this window, not
        // just r < 0, so each column's moments run over one common segment set
        // and the generalized mean stays monotone in r across the whole grid.
        std::vector<double> kept;
        kept.reserve(squares.size());
        for (double s : squares)
            if (s >= config.eps_floor) kept.push_back(s);
        const int dropped = static_cast<int>(squares.size() - kept.size());
        if (kept.empty())
            throw SpectrumUndefinedError(fluct.id, table.windows[wi]);

        for (std::size_t ri = 0; ri < table.orders.size(); ++ri) {
            const double r = table.orders[ri];
            double value;
            if (r == 0.0) {
                double acc = 0.0;
                for (double s : kept) acc += std::log(s);
                value = std::exp(acc / (2.0 * static_cast<double>(kept.size())));
            } else {
                double acc = 0.0;
                for (double s : kept) acc += std::pow(s, 0.5 * r);
                value = std::pow(acc / static_cast<double>(kept.size()), 1.0 / r);
            }
            table.values[ri][wi] = value;
            table.dropped_segments[ri][wi] = dropped;
        }
    }
    return table;
}

ScalingFit fit_scaling(const FluctuationTable& table) {
    const std::size_t nw = table.windows.size();
    if (nw < 3)
        throw SeriesAnalysisError("series '" + table.id +
                                  "': need at least 3 window sizes to fit a slope");

    std::vector<double> xs(nw);
    for (std::size_t i = 0; i < nw; ++i) xs[i] = std::log2(static_cast<double>(table.windows[i]));
    double mx = 0.0;
    for (double x : xs) mx += x;
    mx /= static_cast<double>(nw);

    ScalingFit fit;
    fit.h.resize(table.orders.size());
    fit.r2.resize(table.orders.size());
    for (std::size_t ri = 0; ri < table.orders.size(); ++ri) {
        double my = 0.0;
        for (std::size_t i = 0; i < nw; ++i) my += std::log2(table.values[ri][i]);
        my /= static_cast<double>(nw);

        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < nw; ++i) {
            const double dx = xs[i] - mx;
            const double dy = std::log2(table.values[ri][i]) - my;
            sxx += dx * dx;
            sxy += dx * dy;
            syy += dy * dy;
        }
        fit.h[ri] = sxy / sxx;
        const double ss_res = syy - sxy * sxy / sxx;
        fit.r2[ri] = syy == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return fit;
}

ScalingSpectrum singularity_spectrum(const std::string& id,
                                     const std::vector<double>& orders,
                                     const ScalingFit& fit) {
    const std::size_t n = orders.size();
    if (n < 2 || fit.h.size() != n || fit.r2.size() != n)
        throw std::invalid_argument("scaling fit does not cover the order grid");

    ScalingSpectrum spectrum;
    spectrum.id = id;
    spectrum.orders = orders;
    spectrum.h = fit.h;
    spectrum.fit_r2 = fit.r2;

    spectrum.tau.resize(n);
    for (std::size_t i = 0; i < n; ++i) spectrum.tau[i] = orders[i] * fit.h[i] - 1.0;

    // beta = d tau / dr: central differences inside, one-sided at the ends.
    spectrum.beta.resize(n);
    spectrum.beta[0] = (spectrum.tau[1] - spectrum.tau[0]) / (orders[1] - orders[0]);
    spectrum.beta[n - 1] =
        (spectrum.tau[n - 1] - spectrum.tau[n - 2]) / (orders[n - 1] - orders[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i)
        spectrum.beta[i] =
            (spectrum.tau[i + 1] - spectrum.tau[i - 1]) / (orders[i + 1] - orders[i - 1]);

    spectrum.f_beta.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        spectrum.f_beta[i] = orders[i] * spectrum.beta[i] - spectrum.tau[i];

    const auto [lo, hi] = std::minmax_element(spectrum.beta.begin(), spectrum.beta.end());
    spectrum.gamma = *hi - *lo;

    const auto at2 = std::find(orders.begin(), orders.end(), 2.0);
    if (at2 == orders.end())
        throw std::logic_error("order grid lost r = 2");  // validate() forbids this
    spectrum.hurst = fit.h[static_cast<std::size_t>(at2 - orders.begin())];

    bool rising = true, falling = true;
    for (std::size_t i = 1; i < n; ++i) {
        if (spectrum.beta[i] > spectrum.beta[i - 1]) falling = false;
        if (spectrum.beta[i] < spectrum.beta[i - 1]) rising = false;
    }
    if (!rising && !falling)
        spectrum.warnings.push_back("singularity strengths not monotone in r (spectrum folds back)");
    return spectrum;
}

AnalysisResult analyze_series(const SeriesEntry& entry, const AnalysisConfig& config,
                              bool raw_mode) {
    config.validate();
    const ReturnSeries ret = to_returns(entry, raw_mode);
    const Profile prof = to_profile(ret);
    const LevelFluctuations fluct = extract_fluctuations(prof, config);
    FluctuationTable table = fluctuation_function(fluct, config);
    const ScalingFit fit = fit_scaling(table);
    ScalingSpectrum spectrum = singularity_spectrum(table.id, table.orders, fit);

    long dropped = 0;  // counts are per window, identical across orders
    if (!table.dropped_segments.empty())
        for (int d : table.dropped_segments.front()) dropped += d;
    if (dropped > 0)
        spectrum.warnings.push_back(std::to_string(dropped) +
                                    " segment(s) fell below the fluctuation floor");
    return {std::move(spectrum), std::move(table)};
}

BundleAnalysis analyze_bundle(const SeriesBundle& bundle, const AnalysisConfig& config,
                              int workers) {
    config.validate();
    const std::size_t count = bundle.entries.size();
    std::vector<std::optional<AnalysisResult>> slots(count);
    std::vector<std::optional<std::string>> failures(count);
    std::vector<std::exception_ptr> fatal(count);

    std::atomic<std::size_t> cursor{0};
    auto drain = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= count) return;
            try {
                slots[i] = analyze_series(bundle.entries[i], config, bundle.raw_mode);
            } catch (const SeriesAnalysisError& err) {
                failures[i] = err.what();
            } catch (...) {
                fatal[i] = std::current_exception();
            }
        }
    };

    const std::size_t pool_size =
        std::min<std::size_t>(count, static_cast<std::size_t>(std::max(workers, 1)));
    if (pool_size <= 1) {
        drain();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(pool_size);
        for (std::size_t t = 0; t < pool_size; ++t) pool.emplace_back(drain);
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < count; ++i)
        if (fatal[i]) std::rethrow_exception(fatal[i]);

    BundleAnalysis out;
    for (std::size_t i = 0; i < count; ++i) {
        if (slots[i])
            out.results.push_back(std::move(*slots[i]));
        else if (failures[i])
            out.failures.emplace_back(bundle.entries[i].id, *failures[i]);
    }
    std::sort(out.results.begin(), out.results.end(),
              [](const AnalysisResult& a, const AnalysisResult& b) {
                  return a.spectrum.id < b.spectrum.id;
              });
    std::sort(out.failures.begin(), out.failures.end());
    return out;
}

}  // namespace wbm
