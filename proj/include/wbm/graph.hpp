#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wbm/singularity.hpp"

namespace wbm {

struct ThresholdGraph {
    double xi = 0.0;
    std::vector<std::string> ids;
    std::vector<std::vector<std::uint8_t>> adjacency;  // symmetric 0/1, zero diagonal

    std::size_t size() const { return ids.size(); }
    std::size_t edge_count() const;
    std::vector<std::vector<int>> neighbor_lists() const;
};

struct GraphObservables {
    double avg_degree = 0.0;   // edge density, sum A / (N(N-1))
    double path_length = 0.0;  // mean geodesic over reachable ordered pairs, 0 if none
    double efficiency = 0.0;   // mean 1/d with 1/inf = 0
    double clustering = 0.0;   // mean local clustering coefficient
    std::vector<double> betweenness;  // per node, ordered pairs, endpoints excluded
    double betweenness_avg = 0.0;
    double reachable_pair_fraction = 0.0;
};

struct SweepResult {
    std::vector<double> xi_grid;
    std::vector<GraphObservables> observables;       // one per grid point
    std::vector<std::size_t> clustering_peaks;       // interior local maxima of <C>
    std::size_t betweenness_peak = 0;                // argmax of average betweenness
};

/// Edge i-j present iff rho[i][j] < xi strictly; i != j.
ThresholdGraph build_graph(const SingularityMatrix& matrix, double xi);

GraphObservables observables(const ThresholdGraph& graph);

/// Observables across an increasing threshold grid, plus candidate critical
/// thresholds: interior local maxima of the clustering curve and the global
/// maximum of average betweenness.
SweepResult sweep(const SingularityMatrix& matrix, const std::vector<double>& grid,
                  int workers = 1);

/// count points evenly spaced over [min rho, max rho] (off-diagonal range).
std::vector<double> default_xi_grid(const SingularityMatrix& matrix,
                                    std::size_t count = 200);

/// One "a,b" line per edge, endpoints ordered by index (i < j).
std::string edges_to_csv(const ThresholdGraph& graph);
std::string sweep_to_csv(const SweepResult& sweep);

}  // namespace wbm
