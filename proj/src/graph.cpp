#include "wbm/graph.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>
#include <vector>

#include "wbm/numfmt.hpp"

namespace wbm {

std::size_t ThresholdGraph::edge_count() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j) count += adjacency[i][j];
    return count;
}

std::vector<std::vector<int>> ThresholdGraph::neighbor_lists() const {
    std::vector<std::vector<int>> nb(size());
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j)
            if (adjacency[i][j]) nb[i].push_back(static_cast<int>(j));
    return nb;
}

ThresholdGraph build_graph(const SingularityMatrix& matrix, double xi) {
    ThresholdGraph g;
    g.xi = xi;
    g.ids = matrix.ids;
    const std::size_t n = matrix.size();
    g.adjacency.assign(n, std::vector<std::uint8_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && matrix.rho[i][j] < xi) g.adjacency[i][j] = 1;
    return g;
}

GraphObservables observables(const ThresholdGraph& graph) {
    const int n = static_cast<int>(graph.size());
    if (n < 2) throw std::invalid_argument("graph needs at least two nodes");

    const auto nb = graph.neighbor_lists();
    const double ordered_pairs = static_cast<double>(n) * (n - 1);

    GraphObservables obs;
    std::size_t degree_sum = 0;
    for (const auto& list : nb) degree_sum += list.size();
    obs.avg_degree = static_cast<double>(degree_sum) / ordered_pairs;

    // Local clustering: edges among neighbours over k(k-1)/2.
    double c_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto& list = nb[static_cast<std::size_t>(i)];
        const std::size_t k = list.size();
        if (k < 2) continue;
        std::size_t links = 0;
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b)
                links += graph.adjacency[static_cast<std::size_t>(list[a])]
                                        [static_cast<std::size_t>(list[b])];
        c_sum += 2.0 * static_cast<double>(links) /
                 (static_cast<double>(k) * static_cast<double>(k - 1));
    }
    obs.clustering = c_sum / static_cast<double>(n);

    // One BFS per source gives geodesics, efficiency, and (via the standard
    // dependency accumulation) betweenness; ordered pairs, no halving.
    obs.betweenness.assign(static_cast<std::size_t>(n), 0.0);
    double dist_sum = 0.0, inv_sum = 0.0;
    long reachable = 0;
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<double> sigma(static_cast<std::size_t>(n)), delta(static_cast<std::size_t>(n));
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    std::vector<int> queue(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        order.clear();
        int head = 0, tail = 0;
        dist[static_cast<std::size_t>(s)] = 0;
        sigma[static_cast<std::size_t>(s)] = 1.0;
        queue[tail++] = s;
        while (head < tail) {
            const int v = queue[head++];
            order.push_back(v);
            for (int w : nb[static_cast<std::size_t>(v)]) {
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                    queue[tail++] = w;
                }
                if (dist[static_cast<std::size_t>(w)] ==
                    dist[static_cast<std::size_t>(v)] + 1)
                    sigma[static_cast<std::size_t>(w)] += sigma[static_cast<std::size_t>(v)];
            }
        }
        for (int t = 0; t < n; ++t) {
            if (t == s || dist[static_cast<std::size_t>(t)] < 0) continue;
            ++reachable;
            dist_sum += dist[static_cast<std::size_t>(t)];
            inv_sum += 1.0 / dist[static_cast<std::size_t>(t)];
        }
        for (std::size_t k = order.size(); k-- > 1;) {
            const int w = order[k];
            for (int v : nb[static_cast<std::size_t>(w)])
                if (dist[static_cast<std::size_t>(v)] + 1 ==
                    dist[static_cast<std::size_t>(w)])
                    delta[static_cast<std::size_t>(v)] +=
                        sigma[static_cast<std::size_t>(v)] /
                        sigma[static_cast<std::size_t>(w)] *
                        (1.0 + delta[static_cast<std::size_t>(w)]);
            if (w != s) obs.betweenness[static_cast<std::size_t>(w)] += delta[static_cast<std::size_t>(w)];
        }
    }

    obs.reachable_pair_fraction = static_cast<double>(reachable) / ordered_pairs;
    obs.path_length = reachable > 0 ? dist_sum / static_cast<double>(reachable) : 0.0;
    obs.efficiency = inv_sum / ordered_pairs;
    double b_sum = 0.0;
    for (double b : obs.betweenness) b_sum += b;
    obs.betweenness_avg = b_sum / static_cast<double>(n);
    return obs;
}

SweepResult sweep(const SingularityMatrix& matrix, const std::vector<double>& grid,
                  int workers) {
    if (grid.empty()) throw std::invalid_argument("threshold grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("threshold grid must be strictly increasing");

    SweepResult result;
    result.xi_grid = grid;
    result.observables.resize(grid.size());

    std::atomic<std::size_t> cursor{0};
    auto drain = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= grid.size()) return;
            result.observables[i] = observables(build_graph(matrix, grid[i]));
        }
    };
    const std::size_t pool_size =
        std::min(grid.size(), static_cast<std::size_t>(std::max(workers, 1)));
    if (pool_size <= 1) {
        drain();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(pool_size);
        for (std::size_t t = 0; t < pool_size; ++t) pool.emplace_back(drain);
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double c = result.observables[i].clustering;
        if (c > result.observables[i - 1].clustering &&
            c > result.observables[i + 1].clustering)
            result.clustering_peaks.push_back(i);
    }
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (result.observables[i].betweenness_avg >
            result.observables[result.betweenness_peak].betweenness_avg)
            result.betweenness_peak = i;
    return result;
}

std::vector<double> default_xi_grid(const SingularityMatrix& matrix, std::size_t count) {
    const std::size_t n = matrix.size();
    if (n < 2) throw std::invalid_argument("need at least two series");
    if (count < 1) throw std::invalid_argument("grid needs at least one point");
    double lo = matrix.rho[0][1], hi = matrix.rho[0][1];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            lo = std::min(lo, matrix.rho[i][j]);
            hi = std::max(hi, matrix.rho[i][j]);
        }
    if (hi == lo || count == 1) return {lo};
    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k)
        grid[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
    return grid;
}

std::string edges_to_csv(const ThresholdGraph& graph) {
    std::string out = "a,b\n";
    for (std::size_t i = 0; i < graph.size(); ++i)
        for (std::size_t j = i + 1; j < graph.size(); ++j)
            if (graph.adjacency[i][j]) {
                out += graph.ids[i];
                out += ',';
                out += graph.ids[j];
                out += '\n';
            }
    return out;
}

std::string sweep_to_csv(const SweepResult& sweep) {
    std::string out = "xi,avg_degree,L,E,C,B_avg,reachable_fraction\n";
    for (std::size_t i = 0; i < sweep.xi_grid.size(); ++i) {
        const GraphObservables& o = sweep.observables[i];
        out += format_number(sweep.xi_grid[i]);
        out += ',';
        out += format_number(o.avg_degree);
        out += ',';
        out += format_number(o.path_length);
        out += ',';
        out += format_number(o.efficiency);
        out += ',';
        out += format_number(o.clustering);
        out += ',';
        out += format_number(o.betweenness_avg);
        out += ',';
        out += format_number(o.reachable_pair_fraction);
        out += '\n';
    }
    return out;
}

}  // namespace wbm
