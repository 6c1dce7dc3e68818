#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wbm/mfdfa.hpp"
#include "wbm/wavelet.hpp"

namespace wbm {

struct XiGridSpec {
    bool automatic = true;  // span [min rho, max rho]
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 200;
};

/// Everything a batch run needs. Fields that cannot change output bytes
/// (worker count, destination directory) stay out of the config echo and hash.
struct RunConfig {
    std::string input;
    BundleFormat format = BundleFormat::WideCsv;
    std::string out_dir;  // empty: $WBMFDFA_OUT_DIR, then "."
    AnalysisConfig analysis = AnalysisConfig::defaults();
    std::vector<double> breakpoints;  // empty = automatic binning
    int cut_k = 6;
    XiGridSpec xi_grid;
    std::optional<double> edge_xi;  // also emit the edge list at this threshold
    int workers = 0;                // <= 0: hardware concurrency
};

/// Canonical JSON echo of the content-affecting fields, and its 64-bit
/// FNV-1a hash (16 hex digits) that every output artifact carries.
std::string resolved_config_json(const RunConfig& config);
std::string config_hash(const RunConfig& config);

struct SynthSpec {
    bool cascade = true;  // false: gaussian increments
    double multiplier = 0.75;
    int levels = 12;
    std::size_t length = 65536;  // walk mode only
    std::uint64_t seed = 1;
    int count = 1;  // series per bundle, seeds seed .. seed+count-1
    std::string out_file;
};

struct DwtDumpSpec {
    std::string input;
    BundleFormat format = BundleFormat::WideCsv;
    std::string id;  // empty: first series in the bundle
    WaveletName filter = WaveletName::Db4;
    int levels = 3;
    Boundary boundary = Boundary::Periodic;
    std::string out_file;
};

struct RunReport {
    std::string command;
    std::string hash;
    int series_total = 0;
    int series_ok = 0;
    std::vector<std::pair<std::string, std::string>> failures;  // (id, reason)
    std::vector<std::string> outputs;  // paths relative to the output directory
};

/// Spectrum JSON per series, summary CSV, resolved config, and a run report.
/// Per-series failures are recorded, not fatal.
RunReport cmd_analyze(const RunConfig& config);

/// From an analyze summary: distance matrix, histogram, dendrogram and cut,
/// threshold sweep with critical-threshold candidates, optional edge list.
RunReport cmd_network(const RunConfig& config);

RunReport cmd_synth(const SynthSpec& spec);
RunReport cmd_dwt_dump(const DwtDumpSpec& spec);

}  // namespace wbm
