#pragma once

#include <string>
#include <vector>

#include "wbm/mfdfa.hpp"

namespace wbm {

/// Pairwise absolute differences of spectrum widths. A pseudometric: distinct
/// series with equal widths sit at distance zero and are never merged.
struct SingularityMatrix {
    std::vector<std::string> ids;
    std::vector<double> gamma;              // width per id
    std::vector<std::vector<double>> rho;   // rho[i][j] = |gamma[i] - gamma[j]|

    std::size_t size() const { return ids.size(); }
};

struct RhoHistogram {
    std::vector<std::string> group_labels;  // A, B, ... one per bin
    std::vector<double> lo;                 // bin lower bounds (first = min entry)
    std::vector<double> hi;                 // bin upper bounds (last = max entry)
    std::vector<long> node_counts;          // series binned by gamma - min(gamma)
    std::vector<double> node_pct;
    std::vector<long> entry_counts;         // upper-triangle rho values
    std::vector<double> entry_pct;
};

SingularityMatrix build_matrix(const std::vector<std::string>& ids,
                               const std::vector<double>& gamma);
SingularityMatrix build_matrix(const std::vector<ScalingSpectrum>& spectra);

/// Bins rho entries (and node positions gamma_i - min gamma, which live on the
/// same axis) into half-open groups [b_k, b_{k+1}), last group closed at the
/// max. Empty breakpoints fall back to Freedman-Diaconis bins on the entries.
RhoHistogram segment_distribution(const SingularityMatrix& matrix,
                                  const std::vector<double>& breakpoints);

/// Dense CSV, header row = ids.
std::string matrix_to_csv(const SingularityMatrix& matrix);
std::string histogram_to_csv(const RhoHistogram& histogram);

}  // namespace wbm
