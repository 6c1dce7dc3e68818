#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wbm/series.hpp"
#include "wbm/wavelet.hpp"

namespace wbm {

struct AnalysisConfig {
    std::vector<double> r_grid;  // strictly increasing, must contain r = 2
    int min_level = 4;           // smallest scale, window w = 2^min_level
    int max_level = 0;           // 0 = auto: floor(log2(N/4)) per series
    WaveletName filter = WaveletName::Db4;
    double eps_floor = 1e-12;    // segments with mean square below this are dropped
    bool average_squares = false;  // combine forward/reversed by averaging segment
                                   // mean squares instead of fluctuation arrays

    /// r from -5 to 5 in steps of 0.5, Db4, levels [4, auto].
    static AnalysisConfig defaults();
    void validate() const;
    /// Top decomposition level for a profile of length n: the configured
    /// max_level, or the largest j with 2^j <= n/4 when auto.
    int resolve_max_level(std::size_t n) const;
};

/// Per-scale detrended fluctuations of one profile. The profile is detrended
/// both as given and time-reversed (the reversed result is flipped back so the
/// two arrays are aligned); downstream either averages the arrays or their
/// segment mean squares.
struct LevelFluctuations {
    std::string id;
    int min_level = 0;
    std::vector<std::vector<double>> forward;   // forward[j - min_level]
    std::vector<std::vector<double>> mirrored;  // same, from the reversed profile

    int max_level() const { return min_level + static_cast<int>(forward.size()) - 1; }
    /// Element-wise mean of the forward and mirrored arrays at level j.
    std::vector<double> averaged_level(int j) const;
};

struct FluctuationTable {
    std::string id;
    std::vector<int> windows;    // w = 2^j, ascending
    std::vector<double> orders;  // copy of the r grid
    std::vector<std::vector<double>> values;        // values[r][w], all > 0
    std::vector<std::vector<int>> dropped_segments;  // same shape, sub-floor drops
};

struct ScalingSpectrum {
    std::string id;
    std::vector<double> orders;  // r grid the rest is aligned with
    std::vector<double> h;       // scaling exponents h(r)
    std::vector<double> tau;     // tau(r) = r h(r) - 1
    std::vector<double> beta;    // singularity strengths, d tau / dr
    std::vector<double> f_beta;  // spectrum values f(beta(r))
    std::vector<double> fit_r2;  // goodness of the log-log fit per r
    double gamma = 0.0;          // spectrum width max(beta) - min(beta)
    double hurst = 0.0;          // h at r = 2
    std::vector<std::string> warnings;
};

struct AnalysisResult {
    ScalingSpectrum spectrum;
    FluctuationTable table;
};

struct BundleAnalysis {
    std::vector<AnalysisResult> results;  // sorted by id
    std::vector<std::pair<std::string, std::string>> failures;  // (id, reason), sorted
};

/// Every segment at some window fell below the floor; no moment can be formed.
class SpectrumUndefinedError : public SeriesAnalysisError {
public:
    explicit SpectrumUndefinedError(const std::string& id, int window)
        : SeriesAnalysisError("series '" + id + "': all segments at window " +
                              std::to_string(window) +
                              " fall below the fluctuation floor") {}
};

class ProfileTooShortError : public SeriesAnalysisError {
public:
    ProfileTooShortError(const std::string& id, std::size_t length, const std::string& need)
        : SeriesAnalysisError("series '" + id + "': profile length " +
                              std::to_string(length) + " too short, need " + need) {}
};

LevelFluctuations extract_fluctuations(const Profile& profile, const AnalysisConfig& config);

FluctuationTable fluctuation_function(const LevelFluctuations& fluct,
                                      const AnalysisConfig& config);

struct ScalingFit {
    std::vector<double> h;   // aligned with table.orders
    std::vector<double> r2;
};

/// Least-squares slope of log2 F_r(w) on log2 w per order r.
ScalingFit fit_scaling(const FluctuationTable& table);

ScalingSpectrum singularity_spectrum(const std::string& id,
                                     const std::vector<double>& orders,
                                     const ScalingFit& fit);

AnalysisResult analyze_series(const SeriesEntry& entry, const AnalysisConfig& config,
                              bool raw_mode = false);

/// Analyzes every series with up to `workers` threads. Results and failures
/// come back sorted by id, so output is independent of scheduling.
BundleAnalysis analyze_bundle(const SeriesBundle& bundle, const AnalysisConfig& config,
                              int workers = 1);

}  // namespace wbm
