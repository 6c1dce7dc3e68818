// End-to-end acceptance gate. Each numbered check prints exactly one PASS or
// FAIL line; the exit code is the number of failures. Everything is verified
// against closed forms or the independent reference implementations in
// oracles.hpp, never against the library's own output.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "wbm/cluster.hpp"
#include "wbm/graph.hpp"
#include "wbm/mfdfa.hpp"
#include "wbm/pipeline.hpp"
#include "wbm/series.hpp"
#include "wbm/singularity.hpp"
#include "wbm/synth.hpp"
#include "wbm/wavelet.hpp"

#include "oracles.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("criterion %d %s — %s\n", criterion, ok ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int hardware_workers() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 2 : static_cast<int>(hc);
}

std::vector<std::vector<double>> pair_heights(const wbm::Dendrogram& dend) {
    const std::size_t n = dend.leaf_ids.size();
    std::vector<std::vector<int>> members(n + dend.merges.size());
    for (std::size_t i = 0; i < n; ++i) members[i] = {static_cast<int>(i)};
    std::vector<std::vector<double>> coph(n, std::vector<double>(n, 0.0));
    for (std::size_t m = 0; m < dend.merges.size(); ++m) {
        const wbm::Merge& mg = dend.merges[m];
        const auto& lhs = members[static_cast<std::size_t>(mg.left)];
        const auto& rhs = members[static_cast<std::size_t>(mg.right)];
        for (int a : lhs)
            for (int b : rhs) coph[a][b] = coph[b][a] = mg.height;
        auto& joined = members[n + m];
        joined = lhs;
        joined.insert(joined.end(), rhs.begin(), rhs.end());
    }
    return coph;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return "<missing:" + p.string() + ">";
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Results produced by checks 1 and 2, re-examined by check 3.
std::vector<wbm::AnalysisResult> produced;

// ---------------------------------------------------------------------------

void check_1_cascade_oracle() {
    const wbm::AnalysisConfig config = wbm::AnalysisConfig::defaults();
    bool ok = true;
    std::string detail;
    for (double a : {0.6, 0.75}) {
        wbm::SeriesEntry entry;
        entry.id = "cascade_" + fmt(a);
        entry.values = wbm::binomial_cascade({a, 16, 7});

        const auto start = Clock::now();
        wbm::AnalysisResult result = wbm::analyze_series(entry, config, true);
        const double elapsed = seconds_since(start);

        double worst = 0.0;
        for (std::size_t i = 0; i < result.spectrum.orders.size(); ++i) {
            const double r = result.spectrum.orders[i];
            if (r < -4.0 - 1e-9 || r > 4.0 + 1e-9) continue;
            worst = std::max(worst,
                             std::abs(result.spectrum.h[i] - oracle::cascade_h(a, r)));
        }
        if (!(worst <= 0.10) || !(elapsed < 30.0)) ok = false;
        if (!detail.empty()) detail += "; ";
        detail += "a=" + fmt(a) + ": max |h-analytic| = " + fmt(worst) + " over r in [-4,4], " +
                  fmt(elapsed) + " s";
        produced.push_back(std::move(result));
    }
    report(1, ok, detail + " (bounds: 0.10 and 30 s)");
}

void check_2_monofractal_control() {
    const wbm::AnalysisConfig config = wbm::AnalysisConfig::defaults();

    wbm::SeriesBundle walks;
    walks.raw_mode = true;
    for (int seed = 1; seed <= 50; ++seed) {
        wbm::SeriesEntry entry;
        entry.id = (seed < 10 ? "walk_0" : "walk_") + std::to_string(seed);
        entry.values = wbm::gaussian_walk(std::size_t{1} << 16,
                                          static_cast<std::uint64_t>(seed));
        walks.entries.push_back(std::move(entry));
    }
    wbm::BundleAnalysis walk_analysis =
        wbm::analyze_bundle(walks, config, hardware_workers());

    double mean_h = 0.0, mean_gamma = 0.0;
    for (const wbm::AnalysisResult& r : walk_analysis.results) {
        mean_h += r.spectrum.hurst;
        mean_gamma += r.spectrum.gamma;
    }
    const double count = static_cast<double>(walk_analysis.results.size());
    mean_h /= count;
    mean_gamma /= count;

    int reduced = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        wbm::SeriesEntry cascade;
        cascade.id = "c" + std::to_string(seed);
        cascade.values = wbm::binomial_cascade({0.75, 14, seed});
        wbm::SeriesEntry scrambled;
        scrambled.id = "s" + std::to_string(seed);
        scrambled.values = oracle::shuffled(cascade.values, seed + 1000);

        wbm::AnalysisResult original = wbm::analyze_series(cascade, config, true);
        wbm::AnalysisResult permuted = wbm::analyze_series(scrambled, config, true);
        if (permuted.spectrum.gamma < original.spectrum.gamma) ++reduced;
        produced.push_back(std::move(original));
        produced.push_back(std::move(permuted));
    }

    const bool ok = walk_analysis.results.size() == 50 && mean_h >= 0.45 &&
                    mean_h <= 0.55 && mean_gamma < 0.30 && reduced >= 18;
    report(2, ok,
           "50 walks: mean H = " + fmt(mean_h) + " (need [0.45,0.55]), mean gamma = " +
               fmt(mean_gamma) + " (need < 0.30); shuffling shrank gamma in " +
               std::to_string(reduced) + "/20 cascade pairs (need >= 18)");

    for (wbm::AnalysisResult& r : walk_analysis.results)
        produced.push_back(std::move(r));
}

void check_3_identities() {
    double worst_tau = 0.0, worst_f = 0.0;
    long violations = 0;
    long spectra = 0, tables = 0;
    for (const wbm::AnalysisResult& res : produced) {
        const wbm::ScalingSpectrum& sp = res.spectrum;
        ++spectra;
        for (std::size_t i = 0; i < sp.orders.size(); ++i) {
            const double r = sp.orders[i];
            worst_tau = std::max(worst_tau, std::abs(sp.tau[i] - (r * sp.h[i] - 1.0)));
            worst_f = std::max(
                worst_f, std::abs(sp.f_beta[i] - (r * (sp.beta[i] - sp.h[i]) + 1.0)));
        }
        ++tables;
        const wbm::FluctuationTable& table = res.table;
        for (std::size_t w = 0; w < table.windows.size(); ++w)
            for (std::size_t ri = 1; ri < table.orders.size(); ++ri)
                if (!(table.values[ri][w] >= table.values[ri - 1][w])) ++violations;
    }
    const bool ok = worst_tau <= 1e-9 && worst_f <= 1e-9 && violations == 0;
    report(3, ok,
           "across " + std::to_string(spectra) + " spectra: max |tau - (r h - 1)| = " +
               fmt(worst_tau) + ", max |f - (r (beta - h) + 1)| = " + fmt(worst_f) +
               " (need <= 1e-9); " + std::to_string(violations) +
               " order-monotonicity violations in " + std::to_string(tables) +
               " fluctuation tables (need 0)");
}

void check_4_wavelets() {
    oracle::Rng rng(404);
    double worst_pr = 0.0, worst_parseval = 0.0, worst_annihilation = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 256;
        std::vector<double> x(n);
        for (double& v : x) v = rng.uniform(-1.0, 1.0);

        for (wbm::WaveletName name :
             {wbm::WaveletName::Db4, wbm::WaveletName::Db6, wbm::WaveletName::Db8}) {
            const wbm::WaveletFilter filter = wbm::WaveletFilter::get(name);

            const wbm::DwtDecomposition dec = wbm::dwt_forward(x, filter, 5);
            const std::vector<double> back = wbm::dwt_inverse(dec);
            for (std::size_t i = 0; i < n; ++i)
                worst_pr = std::max(worst_pr, std::abs(back[i] - x[i]));

            double in_energy = 0.0, out_energy = 0.0;
            for (double v : x) in_energy += v * v;
            for (double v : dec.approx) out_energy += v * v;
            for (const auto& band : dec.details)
                for (double v : band) out_energy += v * v;
            worst_parseval =
                std::max(worst_parseval, std::abs(out_energy - in_energy) / in_energy);

            // Degree P-1 polynomial: interior level-1 details must vanish.
            const int degree = filter.vanishing_moments - 1;
            std::vector<double> poly(n);
            std::vector<double> coeff(static_cast<std::size_t>(degree) + 1);
            for (double& c : coeff) c = rng.uniform(-1.0, 1.0);
            for (std::size_t t = 0; t < n; ++t) {
                const double u = static_cast<double>(t) / static_cast<double>(n);
                double acc = 0.0;
                for (std::size_t d = 0; d <= static_cast<std::size_t>(degree); ++d)
                    acc = acc * u + coeff[d];
                poly[t] = acc;
            }
            const wbm::DwtDecomposition pd = wbm::dwt_forward(poly, filter, 1);
            const std::size_t taps = filter.taps();
            for (std::size_t i = 0; i < pd.details[0].size(); ++i) {
                if (2 * i + taps - 1 >= n) continue;  // wrap-around coefficients
                worst_annihilation =
                    std::max(worst_annihilation, std::abs(pd.details[0][i]));
            }
        }
    }
    const bool ok =
        worst_pr <= 1e-10 && worst_parseval <= 1e-9 && worst_annihilation <= 1e-8;
    report(4, ok,
           "100 signals x {db4,db6,db8}: reconstruction " + fmt(worst_pr) +
               " (<= 1e-10), energy drift " + fmt(worst_parseval) +
               " (<= 1e-9), interior polynomial residual " + fmt(worst_annihilation) +
               " (<= 1e-8)");
}

void check_5_metric_axioms() {
    oracle::Rng rng(505);
    long bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double a = oracle::lattice_gamma(rng);
        const double b = oracle::lattice_gamma(rng);
        const double c = oracle::lattice_gamma(rng);
        const wbm::SingularityMatrix m =
            wbm::build_matrix({"a", "b", "c"}, {a, b, c});
        for (std::size_t i = 0; i < 3; ++i) {
            if (m.rho[i][i] != 0.0) ++bad;
            for (std::size_t j = 0; j < 3; ++j) {
                if (!(m.rho[i][j] >= 0.0)) ++bad;
                if (m.rho[i][j] != m.rho[j][i]) ++bad;
            }
        }
        if ((m.rho[0][1] == 0.0) != (a == b)) ++bad;
        if (!(m.rho[0][2] <= m.rho[0][1] + m.rho[1][2])) ++bad;
        if (!(m.rho[0][1] <= m.rho[0][2] + m.rho[2][1])) ++bad;
        if (!(m.rho[1][2] <= m.rho[1][0] + m.rho[0][2])) ++bad;
    }
    report(5, bad == 0,
           "1000 width triples on the dyadic lattice: " + std::to_string(bad) +
               " exact axiom violations (need 0)");
}

void check_6_clustering_oracle() {
    oracle::Rng rng(606);
    long height_mismatches = 0, bridge_mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.index(31);  // 2..32
        std::vector<std::vector<double>> rho(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                rho[i][j] = rho[j][i] = rng.uniform(0.05, 3.0);
        wbm::SingularityMatrix m;
        for (std::size_t i = 0; i < n; ++i) m.ids.push_back("s" + std::to_string(i));
        m.gamma.assign(n, 0.0);
        m.rho = rho;

        const wbm::Dendrogram dend = wbm::single_linkage(m);
        const oracle::NaiveLinkage ref = oracle::naive_single_linkage(rho);
        for (std::size_t k = 0; k < dend.merges.size(); ++k)
            if (dend.merges[k].height != ref.heights[k]) ++height_mismatches;

        if (n <= 16) {
            const auto coph = pair_heights(dend);
            const auto tree = oracle::naive_mst(rho);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (coph[i][j] != oracle::mst_path_max(tree, n, i, j))
                        ++bridge_mismatches;
        }
    }
    report(6, height_mismatches == 0 && bridge_mismatches == 0,
           "100 random matrices (N <= 32): " + std::to_string(height_mismatches) +
               " merge-height mismatches vs the O(N^3) reference; " +
               std::to_string(bridge_mismatches) +
               " minimax-bridge mismatches on N <= 16 (need 0 and 0)");
}

void check_7_graph_oracle() {
    oracle::Rng rng(707);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.index(7);  // 2..8
        std::vector<std::vector<double>> rho(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                rho[i][j] = rho[j][i] = rng.uniform();
        wbm::SingularityMatrix m;
        for (std::size_t i = 0; i < n; ++i) m.ids.push_back("s" + std::to_string(i));
        m.gamma.assign(n, 0.0);
        m.rho = std::move(rho);
        const wbm::ThresholdGraph g = wbm::build_graph(m, 0.35);  // sparse: often split

        std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) adj[i][j] = g.adjacency[i][j];

        const wbm::GraphObservables got = wbm::observables(g);
        const oracle::GraphOracle want = oracle::exhaustive_observables(adj);
        worst = std::max(worst, std::abs(got.avg_degree - want.avg_degree));
        worst = std::max(worst, std::abs(got.path_length - want.path_length));
        worst = std::max(worst, std::abs(got.efficiency - want.efficiency));
        worst = std::max(worst, std::abs(got.clustering - want.clustering));
        worst = std::max(worst,
                         std::abs(got.reachable_pair_fraction - want.reachable_fraction));
        for (std::size_t v = 0; v < n; ++v)
            worst = std::max(worst, std::abs(got.betweenness[v] - want.betweenness[v]));
    }

    // Closed forms: 3-node path, complete graph, 4-leaf star.
    auto graph_of = [](std::size_t n, const std::vector<std::pair<int, int>>& edges) {
        wbm::SingularityMatrix m;
        for (std::size_t i = 0; i < n; ++i) m.ids.push_back("v" + std::to_string(i));
        m.gamma.assign(n, 0.0);
        m.rho.assign(n, std::vector<double>(n, 9.0));
        for (std::size_t i = 0; i < n; ++i) m.rho[i][i] = 0.0;
        for (auto [a, b] : edges)
            m.rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                m.rho[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1.0;
        return wbm::build_graph(m, 2.0);
    };
    bool closed_ok = true;
    {
        const wbm::GraphObservables p3 = wbm::observables(graph_of(3, {{0, 1}, {1, 2}}));
        closed_ok = closed_ok && p3.path_length == 8.0 / 6.0 &&
                    p3.efficiency == 5.0 / 6.0 && p3.betweenness[1] == 2.0;
        const wbm::GraphObservables k5 = wbm::observables(graph_of(
            5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}));
        closed_ok = closed_ok && k5.path_length == 1.0 && k5.efficiency == 1.0 &&
                    k5.clustering == 1.0 && k5.betweenness_avg == 0.0;
        const wbm::GraphObservables star =
            wbm::observables(graph_of(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}));
        closed_ok = closed_ok && star.betweenness[0] == 12.0 && star.clustering == 0.0;
    }
    report(7, worst <= 1e-12 && closed_ok,
           "200 random graphs (N <= 8): max deviation from exhaustive enumeration = " +
               fmt(worst) + " (need <= 1e-12); path/complete/star closed forms " +
               (closed_ok ? "exact" : "WRONG"));
}

void check_8_sweep_monotonicity() {
    oracle::Rng rng(808);
    long degree_drops = 0, efficiency_drops = 0, nesting_breaks = 0;
    int matrices = 0;

    auto examine = [&](const wbm::SingularityMatrix& m) {
        ++matrices;
        const std::vector<double> grid = wbm::default_xi_grid(m, 50);
        if (grid.size() < 2) return;
        const wbm::SweepResult sw = wbm::sweep(m, grid, hardware_workers());
        wbm::ThresholdGraph prev = wbm::build_graph(m, grid[0]);
        for (std::size_t i = 1; i < grid.size(); ++i) {
            if (sw.observables[i].avg_degree < sw.observables[i - 1].avg_degree)
                ++degree_drops;
            if (sw.observables[i].efficiency < sw.observables[i - 1].efficiency)
                ++efficiency_drops;
            const wbm::ThresholdGraph cur = wbm::build_graph(m, grid[i]);
            for (std::size_t a = 0; a < m.size(); ++a)
                for (std::size_t b = 0; b < m.size(); ++b)
                    if (prev.adjacency[a][b] && !cur.adjacency[a][b]) ++nesting_breaks;
            prev = cur;
        }
    };

    // Widths of the 50 monofractal walks from check 2, if available.
    std::vector<std::string> ids;
    std::vector<double> gamma;
    for (const wbm::AnalysisResult& r : produced) {
        if (r.spectrum.id.rfind("walk_", 0) != 0) continue;
        ids.push_back(r.spectrum.id);
        gamma.push_back(r.spectrum.gamma);
    }
    if (ids.size() >= 2) examine(wbm::build_matrix(ids, gamma));

    for (int trial = 0; trial < 3; ++trial) {
        std::vector<std::string> rids;
        std::vector<double> rgamma;
        for (int i = 0; i < 40; ++i) {
            rids.push_back("g" + std::to_string(i));
            rgamma.push_back(oracle::lattice_gamma(rng) * 4.0);
        }
        examine(wbm::build_matrix(rids, rgamma));
    }

    report(8, degree_drops == 0 && efficiency_drops == 0 && nesting_breaks == 0,
           std::to_string(matrices) + " matrices x 50-point grids: " +
               std::to_string(degree_drops) + " density drops, " +
               std::to_string(efficiency_drops) + " efficiency drops, " +
               std::to_string(nesting_breaks) + " nesting violations (need 0/0/0)");
}

void check_9_determinism() {
    const fs::path root =
        fs::temp_directory_path() / "wbm_acceptance_determinism";
    std::error_code ec;
    fs::remove_all(root, ec);
    fs::create_directories(root);

    bool ok = true;
    std::string detail;
    try {
        wbm::SynthSpec synth;
        synth.levels = 11;
        synth.seed = 21;
        synth.count = 4;
        synth.out_file = (root / "bundle.csv").string();
        wbm::cmd_synth(synth);

        wbm::RunConfig rc;
        rc.input = synth.out_file;
        rc.format = wbm::BundleFormat::RawSignal;

        std::vector<std::string> analyze_outputs;
        for (int pass = 0; pass < 3; ++pass) {
            wbm::RunConfig cur = rc;
            cur.out_dir = (root / ("analyze" + std::to_string(pass))).string();
            cur.workers = pass == 2 ? 4 : 1;  // runs 0,1 serial; run 2 threaded
            wbm::cmd_analyze(cur);
            if (pass == 0)
                for (const char* name :
                     {"resolved_config.json", "summary.csv",
                      "spectrum_cascade_a0.75_n11_s21.json",
                      "spectrum_cascade_a0.75_n11_s24.json"})
                    analyze_outputs.push_back(name);
        }
        long analyze_diffs = 0;
        for (const std::string& name : analyze_outputs)
            for (int pass = 1; pass < 3; ++pass)
                if (slurp(root / "analyze0" / name) !=
                    slurp(root / ("analyze" + std::to_string(pass)) / name))
                    ++analyze_diffs;

        wbm::RunConfig net;
        net.input = (root / "analyze0" / "summary.csv").string();
        net.cut_k = 3;
        net.xi_grid.count = 25;
        net.edge_xi = 0.05;
        long network_diffs = 0;
        for (int pass = 0; pass < 3; ++pass) {
            wbm::RunConfig cur = net;
            cur.out_dir = (root / ("network" + std::to_string(pass))).string();
            cur.workers = pass == 2 ? 4 : 1;
            wbm::cmd_network(cur);
        }
        for (const char* name :
             {"resolved_config.json", "matrix.csv", "matrix.json", "histogram.csv",
              "dendrogram.newick", "dendrogram.json", "clusters.csv", "sweep.csv",
              "edges.csv", "report.json"})
            for (int pass = 1; pass < 3; ++pass)
                if (slurp(root / "network0" / name) !=
                    slurp(root / ("network" + std::to_string(pass)) / name))
                    ++network_diffs;

        ok = analyze_diffs == 0 && network_diffs == 0;
        detail = "rerun and workers {1,4}: " + std::to_string(analyze_diffs) +
                 " analyze artifact diffs, " + std::to_string(network_diffs) +
                 " network artifact diffs (need 0 and 0)";
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("pipeline threw: ") + e.what();
    }
    fs::remove_all(root, ec);
    report(9, ok, detail);
}

}  // namespace

int main() {
    check_1_cascade_oracle();
    check_2_monofractal_control();
    check_3_identities();
    check_4_wavelets();
    check_5_metric_axioms();
    check_6_clustering_oracle();
    check_7_graph_oracle();
    check_8_sweep_monotonicity();
    check_9_determinism();
    if (failures == 0)
        std::printf("all acceptance checks passed\n");
    else
        std::printf("%d acceptance check(s) failed\n", failures);
    return failures;
}
