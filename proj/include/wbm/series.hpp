#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace wbm {

/// Shortest series the loader accepts; the default scale range needs at least
/// four windows at w = 16.
constexpr std::size_t kMinSeriesLength = 64;

enum class BundleFormat { WideCsv, LongCsv, RawSignal };

BundleFormat parse_bundle_format(const std::string& text);
const char* bundle_format_label(BundleFormat format);

struct SeriesEntry {
    std::string id;
    std::vector<double> values;
};

/// Immutable after load. raw_mode marks bundles whose values are increments
/// r(t) rather than prices, so the log step is skipped downstream.
struct SeriesBundle {
    std::vector<SeriesEntry> entries;
    std::vector<std::string> dates;  // wide-csv "date" column, kept verbatim
    bool raw_mode = false;
};

struct ReturnSeries {
    std::string id;
    std::vector<double> returns;  // standardized R(t)
    double volatility = 0.0;      // population sigma of r(t)
    double raw_mean = 0.0;        // mean of r(t) before standardization
};

struct Profile {
    std::string id;
    std::vector<double> values;  // Y(n) = sum of R(1..n)
};

/// Base for failures confined to one series; batch runs record these and
/// keep going, anything else aborts the run.
class SeriesAnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Constant input: zero return volatility, the spectrum is undefined.
class DegenerateSeriesError : public SeriesAnalysisError {
public:
    explicit DegenerateSeriesError(const std::string& id)
        : SeriesAnalysisError("degenerate series '" + id + "': zero return volatility") {}
};

SeriesBundle load_bundle(const std::string& path, BundleFormat format);
SeriesBundle parse_bundle(std::istream& in, BundleFormat format, const std::string& origin);

/// Serializes in wide shape; parsing the result reproduces the bundle.
std::string bundle_to_csv(const SeriesBundle& bundle);
void write_bundle_csv(const SeriesBundle& bundle, const std::string& path);

ReturnSeries to_returns(const SeriesEntry& entry, bool raw_mode = false);
Profile to_profile(const ReturnSeries& returns);

}  // namespace wbm
