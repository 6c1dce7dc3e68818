#include "wbm/cluster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "wbm/numfmt.hpp"

namespace wbm {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
};

struct MstEdge {
    int a, b;
    double weight;
};

// Prim over the dense matrix, O(N^2).
std::vector<MstEdge> minimum_spanning_tree(const SingularityMatrix& matrix) {
    const int n = static_cast<int>(matrix.size());
    std::vector<bool> in_tree(n, false);
    std::vector<double> key(n, std::numeric_limits<double>::infinity());
    std::vector<int> from(n, 0);
    key[0] = 0.0;
    std::vector<MstEdge> edges;
    edges.reserve(n - 1);
    for (int step = 0; step < n; ++step) {
        int v = -1;
        for (int i = 0; i < n; ++i)
            if (!in_tree[i] && (v == -1 || key[i] < key[v])) v = i;
        in_tree[v] = true;
        if (v != 0) edges.push_back({from[v], v, key[v]});
        for (int i = 0; i < n; ++i)
            if (!in_tree[i] && matrix.rho[v][i] < key[i]) {
                key[i] = matrix.rho[v][i];
                from[i] = v;
            }
    }
    return edges;
}

}  // namespace

Dendrogram single_linkage(const SingularityMatrix& matrix) {
    const int n = static_cast<int>(matrix.size());
    if (n < 2) throw std::invalid_argument("need at least two series to cluster");

    std::vector<MstEdge> edges = minimum_spanning_tree(matrix);
    // Processing tree edges cheapest-first reproduces single linkage: the
    // cheapest surviving cross link is always a tree edge.
    std::sort(edges.begin(), edges.end(), [](const MstEdge& x, const MstEdge& y) {
        return std::make_tuple(x.weight, std::min(x.a, x.b), std::max(x.a, x.b)) <
               std::make_tuple(y.weight, std::min(y.a, y.b), std::max(y.a, y.b));
    });

    Dendrogram dend;
    dend.leaf_ids = matrix.ids;
    dend.merges.reserve(n - 1);
    UnionFind uf(n);
    std::vector<int> comp_ref(n), min_leaf(n);
    std::iota(comp_ref.begin(), comp_ref.end(), 0);
    std::iota(min_leaf.begin(), min_leaf.end(), 0);
    for (const MstEdge& e : edges) {
        int ra = uf.find(e.a), rb = uf.find(e.b);
        if (min_leaf[rb] < min_leaf[ra]) std::swap(ra, rb);
        const int next_ref = n + static_cast<int>(dend.merges.size());
        dend.merges.push_back({comp_ref[ra], comp_ref[rb], e.weight});
        uf.parent[rb] = ra;
        comp_ref[ra] = next_ref;
    }
    return dend;
}

BranchCut cut_top_branches(const Dendrogram& dend, int k) {
    const int n = static_cast<int>(dend.leaf_ids.size());
    if (k < 1 || k > n) throw std::invalid_argument("cluster count k out of range");

    UnionFind uf(n);
    std::vector<int> ref_leaf(n + dend.merges.size());
    std::iota(ref_leaf.begin(), ref_leaf.begin() + n, 0);
    for (int m = 0; m < n - k; ++m) {
        const Merge& mg = dend.merges[static_cast<std::size_t>(m)];
        const int la = uf.find(ref_leaf[mg.left]);
        const int lb = uf.find(ref_leaf[mg.right]);
        uf.parent[lb] = la;
        ref_leaf[n + m] = la;
    }

    std::vector<std::vector<int>> members(n);
    for (int i = 0; i < n; ++i) members[uf.find(i)].push_back(i);
    std::vector<std::vector<int>> groups;
    for (auto& g : members)
        if (!g.empty()) groups.push_back(std::move(g));
    std::sort(groups.begin(), groups.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                  if (a.size() != b.size()) return a.size() > b.size();
                  return a.front() < b.front();
              });

    BranchCut cut;
    for (const auto& g : groups) {
        std::vector<std::string> ids;
        ids.reserve(g.size());
        for (int leaf : g) ids.push_back(dend.leaf_ids[static_cast<std::size_t>(leaf)]);
        cut.clusters.push_back(std::move(ids));
        cut.percentages.push_back(100.0 * static_cast<double>(g.size()) /
                                  static_cast<double>(n));
    }
    return cut;
}

namespace {

struct TreeInfo {
    int size;      // leaves under the ref
    int min_leaf;  // smallest leaf index under the ref
};

std::string newick_label(const std::string& id) {
    const bool plain = !id.empty() &&
                       id.find_first_not_of("ABCDEFGHIJKLMNOPQRSTUVWXYZ"
                                            "abcdefghijklmnopqrstuvwxyz"
                                            "0123456789_.-") == std::string::npos;
    if (plain) return id;
    std::string quoted = "'";
    for (char c : id) {
        quoted += c;
        if (c == '\'') quoted += '\'';
    }
    quoted += '\'';
    return quoted;
}

void write_newick(const Dendrogram& dend, const std::vector<TreeInfo>& info, int ref,
                  double parent_height, std::string& out) {
    const int n = static_cast<int>(dend.leaf_ids.size());
    double height = 0.0;
    if (ref < n) {
        out += newick_label(dend.leaf_ids[static_cast<std::size_t>(ref)]);
    } else {
        const Merge& mg = dend.merges[static_cast<std::size_t>(ref - n)];
        height = mg.height;
        int first = mg.left, second = mg.right;
        const TreeInfo& fi = info[static_cast<std::size_t>(first)];
        const TreeInfo& si = info[static_cast<std::size_t>(second)];
        if (si.size < fi.size || (si.size == fi.size && si.min_leaf < fi.min_leaf))
            std::swap(first, second);
        out += '(';
        write_newick(dend, info, first, height, out);
        out += ',';
        write_newick(dend, info, second, height, out);
        out += ')';
    }
    if (parent_height >= 0.0) {
        out += ':';
        out += format_number(parent_height - height);
    }
}

}  // namespace

std::string to_newick(const Dendrogram& dend) {
    const int n = static_cast<int>(dend.leaf_ids.size());
    if (dend.merges.size() + 1 != dend.leaf_ids.size())
        throw std::invalid_argument("dendrogram merge count does not match leaves");

    std::vector<TreeInfo> info(dend.leaf_ids.size() + dend.merges.size());
    for (int i = 0; i < n; ++i) info[static_cast<std::size_t>(i)] = {1, i};
    for (std::size_t m = 0; m < dend.merges.size(); ++m) {
        const TreeInfo& a = info[static_cast<std::size_t>(dend.merges[m].left)];
        const TreeInfo& b = info[static_cast<std::size_t>(dend.merges[m].right)];
        info[static_cast<std::size_t>(n) + m] = {a.size + b.size,
                                                 std::min(a.min_leaf, b.min_leaf)};
    }

    std::string out;
    write_newick(dend, info, n + static_cast<int>(dend.merges.size()) - 1, -1.0, out);
    out += ";\n";
    return out;
}

std::string cut_to_csv(const BranchCut& cut) {
    std::string out = "cluster_label,leaf_id\n";
    for (std::size_t c = 0; c < cut.clusters.size(); ++c)
        for (const auto& id : cut.clusters[c]) {
            out += 'C';
            out += std::to_string(c + 1);
            out += ',';
            out += id;
            out += '\n';
        }
    return out;
}

}  // namespace wbm
