// Command-line front end: analyze a bundle, build the width network from a
// summary, generate synthetic fixtures, or dump raw wavelet coefficients.

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wbm/pipeline.hpp"

namespace {

using nlohmann::json;

std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0)) throw CLI::ValidationError("--r-step must be positive");
    const int n = static_cast<int>(std::floor((hi - lo) / step + 0.5)) + 1;
    if (n < 2) throw CLI::ValidationError("r grid needs at least two points");
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) grid[static_cast<std::size_t>(k)] = lo + step * k;
    return grid;
}

// JSON config file; command-line flags override individual fields afterwards.
void apply_config_file(wbm::RunConfig& rc, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j = json::parse(in);
    for (const auto& [key, value] : j.items()) {
        if (key == "input") rc.input = value.get<std::string>();
        else if (key == "format") rc.format = wbm::parse_bundle_format(value.get<std::string>());
        else if (key == "out_dir") rc.out_dir = value.get<std::string>();
        else if (key == "r_grid") rc.analysis.r_grid = value.get<std::vector<double>>();
        else if (key == "min_level") rc.analysis.min_level = value.get<int>();
        else if (key == "max_level") rc.analysis.max_level = value.get<int>();
        else if (key == "filter")
            rc.analysis.filter = wbm::WaveletFilter::parse(value.get<std::string>());
        else if (key == "eps_floor") rc.analysis.eps_floor = value.get<double>();
        else if (key == "average_squares") rc.analysis.average_squares = value.get<bool>();
        else if (key == "breakpoints") rc.breakpoints = value.get<std::vector<double>>();
        else if (key == "cut_k") rc.cut_k = value.get<int>();
        else if (key == "xi_grid") {
            if (value.contains("mode"))
                rc.xi_grid.automatic = value["mode"].get<std::string>() == "auto";
            if (value.contains("lo")) rc.xi_grid.lo = value["lo"].get<double>();
            if (value.contains("hi")) rc.xi_grid.hi = value["hi"].get<double>();
            if (value.contains("count")) rc.xi_grid.count = value["count"].get<std::size_t>();
        } else if (key == "edge_xi") {
            if (!value.is_null()) rc.edge_xi = value.get<double>();
        } else if (key == "workers") rc.workers = value.get<int>();
        else if (key == "config_hash") { /* echo field, ignore on input */ }
        else throw std::runtime_error("unknown config key: " + key);
    }
}

void print_report(const wbm::RunReport& report, const std::string& out_dir) {
    std::cout << report.command << ": " << report.series_ok << "/" << report.series_total
              << " series ok";
    if (!report.hash.empty()) std::cout << ", config " << report.hash;
    if (!out_dir.empty()) std::cout << ", outputs in " << out_dir;
    std::cout << "\n";
    for (const auto& [id, reason] : report.failures)
        std::cerr << "  skipped " << id << ": " << reason << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavelet-based multifractal analysis and singularity-width networks"};
    app.require_subcommand(1);

    wbm::RunConfig rc;
    std::string config_path;
    double r_lo = -5.0, r_hi = 5.0, r_step = 0.5;
    std::string format_text, filter_text;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file; flags override");
        sub->add_option("--out", rc.out_dir, "output directory (default $WBMFDFA_OUT_DIR or .)");
        sub->add_option("--workers", rc.workers, "worker threads, 0 = all cores");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "spectra and summary for a bundle");
    analyze->add_option("--input", rc.input, "bundle CSV path");
    analyze->add_option("--format", format_text, "wide_csv | long_csv | raw_signal");
    analyze->add_option("--r-min", r_lo, "lowest moment order");
    analyze->add_option("--r-max", r_hi, "highest moment order");
    analyze->add_option("--r-step", r_step, "moment order spacing");
    analyze->add_option("--min-level", rc.analysis.min_level, "smallest scale level");
    analyze->add_option("--max-level", rc.analysis.max_level,
                        "largest scale level, 0 = auto");
    analyze->add_option("--filter", filter_text, "db4 | db6 | db8");
    analyze->add_option("--eps-floor", rc.analysis.eps_floor,
                        "segment mean-square floor");
    analyze->add_flag("--average-squares", rc.analysis.average_squares,
                      "average segment mean squares instead of fluctuation arrays");
    add_common(analyze);

    CLI::App* network = app.add_subcommand("network", "matrix, clustering, threshold sweep");
    network->add_option("--summary", rc.input, "summary.csv from a previous analyze run");
    std::vector<double> breakpoints;
    network->add_option("--breakpoints", breakpoints,
                        "histogram cut points (default: automatic bins)")
        ->delimiter(',');
    network->add_option("--k", rc.cut_k, "clusters to keep from the dendrogram top");
    double xi_lo = 0.0, xi_hi = 0.0, edge_xi = 0.0;
    network->add_option("--xi-lo", xi_lo, "sweep grid start (with --xi-hi)");
    network->add_option("--xi-hi", xi_hi, "sweep grid end");
    network->add_option("--xi-count", rc.xi_grid.count, "sweep grid points");
    network->add_option("--xi", edge_xi, "emit the edge list at this threshold");
    add_common(network);

    CLI::App* synth = app.add_subcommand("synth", "write a synthetic raw-signal bundle");
    wbm::SynthSpec synth_spec;
    std::string kind = "cascade";
    synth->add_option("--kind", kind, "cascade | walk")
        ->check(CLI::IsMember({"cascade", "walk"}));
    synth->add_option("--a", synth_spec.multiplier, "cascade multiplier in (0.5, 1)");
    synth->add_option("--levels", synth_spec.levels, "cascade depth, length 2^levels");
    synth->add_option("--length", synth_spec.length, "walk length");
    synth->add_option("--seed", synth_spec.seed, "first seed");
    synth->add_option("--count", synth_spec.count, "series per bundle");
    synth->add_option("--out", synth_spec.out_file, "output CSV path")->required();

    CLI::App* dump = app.add_subcommand("dwt-dump", "dump wavelet coefficients as CSV");
    wbm::DwtDumpSpec dump_spec;
    std::string dump_format = "wide_csv", dump_filter = "db4", dump_boundary = "periodic";
    dump->add_option("--input", dump_spec.input, "bundle CSV path")->required();
    dump->add_option("--format", dump_format, "wide_csv | long_csv | raw_signal");
    dump->add_option("--id", dump_spec.id, "series id (default: first)");
    dump->add_option("--filter", dump_filter, "db4 | db6 | db8");
    dump->add_option("--levels", dump_spec.levels, "decomposition depth");
    dump->add_option("--boundary", dump_boundary, "periodic | symmetric")
        ->check(CLI::IsMember({"periodic", "symmetric"}));
    dump->add_option("--out", dump_spec.out_file, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze || *network) {
            // Precedence: defaults, then config file, then explicit flags.
            wbm::RunConfig flag_rc = rc;
            if (!config_path.empty()) {
                rc = wbm::RunConfig{};
                apply_config_file(rc, config_path);
            }
            CLI::App* sub = *analyze ? analyze : network;
            auto given = [&](const std::string& name) { return sub->count(name) > 0; };
            if (given("--out")) rc.out_dir = flag_rc.out_dir;
            if (given("--workers")) rc.workers = flag_rc.workers;
            if (*analyze) {
                if (given("--input")) rc.input = flag_rc.input;
                if (given("--format")) rc.format = wbm::parse_bundle_format(format_text);
                if (given("--r-min") || given("--r-max") || given("--r-step") ||
                    rc.analysis.r_grid.empty())
                    rc.analysis.r_grid = make_grid(r_lo, r_hi, r_step);
                if (given("--min-level")) rc.analysis.min_level = flag_rc.analysis.min_level;
                if (given("--max-level")) rc.analysis.max_level = flag_rc.analysis.max_level;
                if (given("--filter"))
                    rc.analysis.filter = wbm::WaveletFilter::parse(filter_text);
                if (given("--eps-floor")) rc.analysis.eps_floor = flag_rc.analysis.eps_floor;
                if (given("--average-squares"))
                    rc.analysis.average_squares = flag_rc.analysis.average_squares;
                if (rc.input.empty())
                    throw std::runtime_error("analyze needs --input (or config \"input\")");
                print_report(wbm::cmd_analyze(rc), rc.out_dir);
            } else {
                if (given("--summary")) rc.input = flag_rc.input;
                if (given("--breakpoints")) rc.breakpoints = breakpoints;
                if (given("--k")) rc.cut_k = flag_rc.cut_k;
                if (given("--xi-lo") != given("--xi-hi"))
                    throw std::runtime_error("--xi-lo and --xi-hi go together");
                if (given("--xi-lo")) {
                    rc.xi_grid.automatic = false;
                    rc.xi_grid.lo = xi_lo;
                    rc.xi_grid.hi = xi_hi;
                }
                if (given("--xi-count")) rc.xi_grid.count = flag_rc.xi_grid.count;
                if (given("--xi")) rc.edge_xi = edge_xi;
                if (rc.input.empty())
                    throw std::runtime_error("network needs --summary (or config \"input\")");
                print_report(wbm::cmd_network(rc), rc.out_dir);
            }
        } else if (*synth) {
            synth_spec.cascade = kind == "cascade";
            print_report(wbm::cmd_synth(synth_spec), "");
        } else if (*dump) {
            dump_spec.format = wbm::parse_bundle_format(dump_format);
            dump_spec.filter = wbm::WaveletFilter::parse(dump_filter);
            dump_spec.boundary = dump_boundary == "periodic" ? wbm::Boundary::Periodic
                                                             : wbm::Boundary::Symmetric;
            print_report(wbm::cmd_dwt_dump(dump_spec), "");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
