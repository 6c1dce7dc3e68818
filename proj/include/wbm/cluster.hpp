#pragma once

#include <string>
#include <vector>

#include "wbm/singularity.hpp"

namespace wbm {

/// One agglomeration step. Refs below N name leaves; ref N + k names the
/// cluster produced by merge k.
struct Merge {
    int left = 0;
    int right = 0;
    double height = 0.0;
};

struct Dendrogram {
    std::vector<std::string> leaf_ids;  // input order of the matrix
    std::vector<Merge> merges;          // N - 1 steps, heights non-decreasing
};

struct BranchCut {
    std::vector<std::vector<std::string>> clusters;  // largest first, members id-ordered
    std::vector<double> percentages;                 // share of leaves per cluster
};

/// Minimum-spanning-tree based single linkage. Equal distances are resolved
/// toward the pair with the lexicographically smallest (min index, max index),
/// so the dendrogram is deterministic.
Dendrogram single_linkage(const SingularityMatrix& matrix);

/// The k clusters left after discarding the k-1 highest merges.
BranchCut cut_top_branches(const Dendrogram& dend, int k);

/// Newick text; branch lengths are height differences so leaf-to-ancestor
/// distance reproduces the merge height. Smaller subtrees print first.
std::string to_newick(const Dendrogram& dend);

std::string cut_to_csv(const BranchCut& cut);

}  // namespace wbm
