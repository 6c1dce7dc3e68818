#include "wbm/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "wbm/cluster.hpp"
#include "wbm/graph.hpp"
#include "wbm/numfmt.hpp"
#include "wbm/singularity.hpp"
#include "wbm/synth.hpp"

namespace wbm {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string to_hex(std::uint64_t v) {
    const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

json config_echo(const RunConfig& c) {
    json j;
    j["input"] = c.input;
    j["format"] = bundle_format_label(c.format);
    j["r_grid"] = c.analysis.r_grid;
    j["min_level"] = c.analysis.min_level;
    j["max_level"] = c.analysis.max_level;
    j["filter"] = WaveletFilter::get(c.analysis.filter).label();
    j["eps_floor"] = c.analysis.eps_floor;
    j["average_squares"] = c.analysis.average_squares;
    j["breakpoints"] = c.breakpoints;
    j["cut_k"] = c.cut_k;
    json grid;
    grid["mode"] = c.xi_grid.automatic ? "auto" : "explicit";
    if (!c.xi_grid.automatic) {
        grid["lo"] = c.xi_grid.lo;
        grid["hi"] = c.xi_grid.hi;
    }
    grid["count"] = c.xi_grid.count;
    j["xi_grid"] = grid;
    j["edge_xi"] = c.edge_xi ? json(*c.edge_xi) : json(nullptr);
    return j;
}

std::string resolve_out_dir(const RunConfig& c) {
    if (!c.out_dir.empty()) return c.out_dir;
    if (const char* env = std::getenv("WBMFDFA_OUT_DIR"); env != nullptr && *env != '\0')
        return env;
    return ".";
}

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string sanitize_id(const std::string& id) {
    std::string s;
    for (char c : id) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
        s += ok ? c : '_';
    }
    if (s.empty()) s = "series";
    return s;
}

json spectrum_json(const ScalingSpectrum& sp, const json& echo, const std::string& hash) {
    json j;
    j["id"] = sp.id;
    json ce = echo;
    ce["config_hash"] = hash;
    j["config_echo"] = ce;
    json h = json::array(), tau = json::array(), beta = json::array(),
         fb = json::array();
    for (std::size_t i = 0; i < sp.orders.size(); ++i) {
        h.push_back({sp.orders[i], sp.h[i], sp.fit_r2[i]});
        tau.push_back({sp.orders[i], sp.tau[i]});
        beta.push_back({sp.orders[i], sp.beta[i]});
        fb.push_back({sp.beta[i], sp.f_beta[i]});
    }
    j["h"] = h;
    j["tau"] = tau;
    j["beta"] = beta;
    j["f_beta"] = fb;
    j["gamma"] = sp.gamma;
    j["hurst"] = sp.hurst;
    j["warnings"] = sp.warnings;
    return j;
}

json report_json(const RunReport& report) {
    json j;
    j["command"] = report.command;
    j["config_hash"] = report.hash;
    j["series_total"] = report.series_total;
    j["series_ok"] = report.series_ok;
    json fails = json::array();
    for (const auto& [id, reason] : report.failures)
        fails.push_back({{"id", id}, {"reason", reason}});
    j["failures"] = fails;
    j["outputs"] = report.outputs;
    return j;
}

struct SummaryRow {
    std::string id;
    double gamma = 0.0;
    double hurst = 0.0;
};

bool parse_field_double(const std::string& text, double& out) {
    const char* begin = text.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end != begin && *end == '\0';
}

// Reads the id,gamma,hurst summary written by cmd_analyze. Also recovers the
// config hash of the producing run for provenance.
std::pair<std::vector<SummaryRow>, std::string> read_summary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing spectra summary: " + path);
    std::vector<SummaryRow> rows;
    std::string producer_hash;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string tag = "# config_hash=";
            if (line.rfind(tag, 0) == 0) producer_hash = line.substr(tag.size());
            continue;
        }
        if (!have_header) {
            if (line != "id,gamma,hurst")
                throw std::runtime_error(path + ": expected header id,gamma,hurst");
            have_header = true;
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::runtime_error(path + ": malformed summary row: " + line);
        SummaryRow row;
        row.id = line.substr(0, c1);
        if (!parse_field_double(line.substr(c1 + 1, c2 - c1 - 1), row.gamma) ||
            !parse_field_double(line.substr(c2 + 1), row.hurst))
            throw std::runtime_error(path + ": malformed summary row: " + line);
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2)
        throw std::runtime_error(path + ": need at least two series to build a matrix");
    return {std::move(rows), std::move(producer_hash)};
}

std::vector<double> explicit_grid(const XiGridSpec& spec) {
    if (spec.count < 1) throw std::invalid_argument("threshold grid needs at least one point");
    if (spec.lo > spec.hi) throw std::invalid_argument("threshold grid bounds reversed");
    if (spec.count == 1 || spec.lo == spec.hi) return {spec.lo};
    std::vector<double> grid(spec.count);
    for (std::size_t k = 0; k < spec.count; ++k)
        grid[k] = spec.lo + (spec.hi - spec.lo) * static_cast<double>(k) /
                                static_cast<double>(spec.count - 1);
    return grid;
}

}  // namespace

std::string resolved_config_json(const RunConfig& config) {
    json echo = config_echo(config);
    echo["config_hash"] = config_hash(config);
    return echo.dump(2) + "\n";
}

std::string config_hash(const RunConfig& config) {
    return to_hex(fnv1a64(config_echo(config).dump(2)));
}

RunReport cmd_analyze(const RunConfig& config) {
    config.analysis.validate();
    const fs::path dir = resolve_out_dir(config);
    fs::create_directories(dir);
    const json echo = config_echo(config);
    const std::string hash = to_hex(fnv1a64(echo.dump(2)));

    const SeriesBundle bundle = load_bundle(config.input, config.format);
    BundleAnalysis analysis =
        analyze_bundle(bundle, config.analysis, resolve_workers(config.workers));

    RunReport report;
    report.command = "analyze";
    report.hash = hash;
    report.series_total = static_cast<int>(bundle.entries.size());
    report.series_ok = static_cast<int>(analysis.results.size());
    report.failures = analysis.failures;

    write_text(dir / "resolved_config.json", resolved_config_json(config));
    report.outputs.push_back("resolved_config.json");

    std::set<std::string> used;
    for (const AnalysisResult& res : analysis.results) {
        const std::string base = "spectrum_" + sanitize_id(res.spectrum.id);
        std::string name = base + ".json";
        int suffix = 2;
        while (!used.insert(name).second)
            name = base + "_" + std::to_string(suffix++) + ".json";
        write_text(dir / name, spectrum_json(res.spectrum, echo, hash).dump(2) + "\n");
        report.outputs.push_back(name);
    }

    std::string summary = "# config_hash=" + hash + "\nid,gamma,hurst\n";
    for (const AnalysisResult& res : analysis.results) {
        summary += res.spectrum.id;
        summary += ',';
        summary += format_number(res.spectrum.gamma);
        summary += ',';
        summary += format_number(res.spectrum.hurst);
        summary += '\n';
    }
    write_text(dir / "summary.csv", summary);
    report.outputs.push_back("summary.csv");

    write_text(dir / "report.json", report_json(report).dump(2) + "\n");
    return report;
}

RunReport cmd_network(const RunConfig& config) {
    const fs::path dir = resolve_out_dir(config);
    fs::create_directories(dir);
    const json echo = config_echo(config);
    const std::string hash = to_hex(fnv1a64(echo.dump(2)));
    const std::string hash_line = "# config_hash=" + hash + "\n";

    const auto [rows, producer_hash] = read_summary(config.input);
    std::vector<std::string> ids;
    std::vector<double> gamma;
    ids.reserve(rows.size());
    gamma.reserve(rows.size());
    for (const SummaryRow& row : rows) {
        ids.push_back(row.id);
        gamma.push_back(row.gamma);
    }
    const SingularityMatrix matrix = build_matrix(ids, gamma);
    const std::size_t n = matrix.size();

    RunReport report;
    report.command = "network";
    report.hash = hash;
    report.series_total = static_cast<int>(n);
    report.series_ok = static_cast<int>(n);

    write_text(dir / "resolved_config.json", resolved_config_json(config));
    report.outputs.push_back("resolved_config.json");

    write_text(dir / "matrix.csv", hash_line + matrix_to_csv(matrix));
    report.outputs.push_back("matrix.csv");

    json mj;
    mj["config_hash"] = hash;
    mj["ids"] = matrix.ids;
    mj["gamma"] = matrix.gamma;
    json upper = json::array();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) upper.push_back(matrix.rho[i][j]);
    mj["rho_upper"] = upper;
    write_text(dir / "matrix.json", mj.dump(2) + "\n");
    report.outputs.push_back("matrix.json");

    const RhoHistogram hist = segment_distribution(matrix, config.breakpoints);
    write_text(dir / "histogram.csv", hash_line + histogram_to_csv(hist));
    report.outputs.push_back("histogram.csv");

    const Dendrogram dend = single_linkage(matrix);
    write_text(dir / "dendrogram.newick", to_newick(dend));
    report.outputs.push_back("dendrogram.newick");

    json dj;
    dj["config_hash"] = hash;
    dj["leaf_ids"] = dend.leaf_ids;
    json merges = json::array();
    for (const Merge& m : dend.merges) merges.push_back({m.left, m.right, m.height});
    dj["merges"] = merges;
    write_text(dir / "dendrogram.json", dj.dump(2) + "\n");
    report.outputs.push_back("dendrogram.json");

    const int k_eff = std::clamp(config.cut_k, 1, static_cast<int>(n));
    const BranchCut cut = cut_top_branches(dend, k_eff);
    write_text(dir / "clusters.csv", hash_line + cut_to_csv(cut));
    report.outputs.push_back("clusters.csv");

    const std::vector<double> grid = config.xi_grid.automatic
                                         ? default_xi_grid(matrix, config.xi_grid.count)
                                         : explicit_grid(config.xi_grid);
    const SweepResult sw = sweep(matrix, grid, resolve_workers(config.workers));
    write_text(dir / "sweep.csv", hash_line + sweep_to_csv(sw));
    report.outputs.push_back("sweep.csv");

    json extra;
    if (config.edge_xi) {
        const ThresholdGraph graph = build_graph(matrix, *config.edge_xi);
        write_text(dir / "edges.csv", hash_line + edges_to_csv(graph));
        report.outputs.push_back("edges.csv");
        const GraphObservables obs = observables(graph);
        extra["edge_graph"] = {{"xi", *config.edge_xi},
                               {"edges", graph.edge_count()},
                               {"avg_degree", obs.avg_degree},
                               {"path_length", obs.path_length},
                               {"efficiency", obs.efficiency},
                               {"clustering", obs.clustering},
                               {"betweenness_avg", obs.betweenness_avg},
                               {"reachable_pair_fraction", obs.reachable_pair_fraction}};
    }

    json rj = report_json(report);
    rj["input_config_hash"] = producer_hash;
    rj["cut_k_effective"] = k_eff;
    json peaks = json::array();
    for (std::size_t i : sw.clustering_peaks) peaks.push_back(sw.xi_grid[i]);
    rj["clustering_peak_xis"] = peaks;
    rj["betweenness_peak_xi"] = sw.xi_grid[sw.betweenness_peak];
    for (auto& [key, value] : extra.items()) rj[key] = value;
    write_text(dir / "report.json", rj.dump(2) + "\n");
    return report;
}

RunReport cmd_synth(const SynthSpec& spec) {
    if (spec.count < 1) throw std::invalid_argument("series count must be at least 1");
    if (spec.out_file.empty()) throw std::invalid_argument("output file required");
    if (!spec.cascade && spec.length < kMinSeriesLength)
        throw std::invalid_argument("walk length must be at least " +
                                    std::to_string(kMinSeriesLength));

    SeriesBundle bundle;
    bundle.raw_mode = true;
    for (int i = 0; i < spec.count; ++i) {
        const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(i);
        SeriesEntry entry;
        if (spec.cascade) {
            entry.id = "cascade_a" + format_number(spec.multiplier) + "_n" +
                       std::to_string(spec.levels) + "_s" + std::to_string(seed);
            entry.values = binomial_cascade({spec.multiplier, spec.levels, seed});
        } else {
            entry.id = "walk_n" + std::to_string(spec.length) + "_s" + std::to_string(seed);
            entry.values = gaussian_walk(spec.length, seed);
        }
        bundle.entries.push_back(std::move(entry));
    }

    const fs::path path(spec.out_file);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_bundle_csv(bundle, spec.out_file);

    RunReport report;
    report.command = "synth";
    report.series_total = spec.count;
    report.series_ok = spec.count;
    report.outputs.push_back(spec.out_file);
    return report;
}

RunReport cmd_dwt_dump(const DwtDumpSpec& spec) {
    if (spec.out_file.empty()) throw std::invalid_argument("output file required");
    const SeriesBundle bundle = load_bundle(spec.input, spec.format);
    const SeriesEntry* entry = nullptr;
    if (spec.id.empty()) {
        entry = &bundle.entries.front();
    } else {
        for (const SeriesEntry& e : bundle.entries)
            if (e.id == spec.id) {
                entry = &e;
                break;
            }
        if (entry == nullptr)
            throw std::runtime_error("series '" + spec.id + "' not found in " + spec.input);
    }

    const WaveletFilter filter = WaveletFilter::get(spec.filter);
    const DwtDecomposition dec =
        dwt_forward(entry->values, filter, spec.levels, spec.boundary);

    std::string csv = "# series " + entry->id + ", filter " + filter.label() +
                      ", level 0 = approximation at depth " +
                      std::to_string(dec.levels) + "\nlevel,index,value\n";
    for (std::size_t i = 0; i < dec.approx.size(); ++i) {
        csv += "0,";
        csv += std::to_string(i);
        csv += ',';
        csv += format_number(dec.approx[i]);
        csv += '\n';
    }
    for (std::size_t l = 0; l < dec.details.size(); ++l)
        for (std::size_t i = 0; i < dec.details[l].size(); ++i) {
            csv += std::to_string(l + 1);
            csv += ',';
            csv += std::to_string(i);
            csv += ',';
            csv += format_number(dec.details[l][i]);
            csv += '\n';
        }

    const fs::path path(spec.out_file);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_text(path, csv);

    RunReport report;
    report.command = "dwt-dump";
    report.series_total = static_cast<int>(bundle.entries.size());
    report.series_ok = 1;
    report.outputs.push_back(spec.out_file);
    return report;
}

}  // namespace wbm
