#include "wbm/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wbm/numfmt.hpp"

namespace wbm {

SingularityMatrix build_matrix(const std::vector<std::string>& ids,
                               const std::vector<double>& gamma) {
    if (ids.size() != gamma.size())
        throw std::invalid_argument("id and gamma counts differ");
    if (ids.size() < 2)
        throw std::invalid_argument("need at least two spectra for a matrix");
    for (std::size_t i = 0; i < gamma.size(); ++i)
        if (!std::isfinite(gamma[i]))
            throw std::invalid_argument("non-finite width for series '" + ids[i] + "'");

    SingularityMatrix m;
    m.ids = ids;
    m.gamma = gamma;
    m.rho.assign(ids.size(), std::vector<double>(ids.size(), 0.0));
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = 0; j < ids.size(); ++j)
            m.rho[i][j] = std::fabs(gamma[i] - gamma[j]);
    return m;
}

SingularityMatrix build_matrix(const std::vector<ScalingSpectrum>& spectra) {
    std::vector<std::string> ids;
    std::vector<double> gamma;
    ids.reserve(spectra.size());
    gamma.reserve(spectra.size());
    for (const auto& s : spectra) {
        ids.push_back(s.id);
        gamma.push_back(s.gamma);
    }
    return build_matrix(ids, gamma);
}

namespace {

std::string group_label(std::size_t index) {
    std::string label;
    std::size_t n = index;
    for (;;) {
        label.insert(label.begin(), static_cast<char>('A' + n % 26));
        if (n < 26) break;
        n = n / 26 - 1;
    }
    return label;
}

// Linear-interpolation quantile on a sorted sample.
double quantile(const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

// Freedman-Diaconis cut points over the entry distribution.
std::vector<double> auto_breakpoints(const std::vector<double>& entries) {
    std::vector<double> sorted = entries;
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front(), hi = sorted.back();
    if (hi == lo) return {};
    const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
    std::size_t bins = 1;
    if (width > 0.0)
        bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    bins = std::clamp<std::size_t>(bins, 1, 64);
    std::vector<double> cuts;
    for (std::size_t k = 1; k < bins; ++k)
        cuts.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins));
    return cuts;
}

}  // namespace

RhoHistogram segment_distribution(const SingularityMatrix& matrix,
                                  const std::vector<double>& breakpoints) {
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            throw std::invalid_argument("breakpoints must be strictly increasing");
    const std::size_t n = matrix.size();
    if (n < 2) throw std::invalid_argument("need at least two series");

    std::vector<double> entries;
    entries.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) entries.push_back(matrix.rho[i][j]);

    const std::vector<double> cuts =
        breakpoints.empty() ? auto_breakpoints(entries) : breakpoints;
    const std::size_t groups = cuts.size() + 1;

    RhoHistogram hist;
    hist.group_labels.resize(groups);
    for (std::size_t g = 0; g < groups; ++g) hist.group_labels[g] = group_label(g);
    const auto [emin, emax] = std::minmax_element(entries.begin(), entries.end());
    hist.lo.resize(groups);
    hist.hi.resize(groups);
    hist.lo[0] = *emin;
    hist.hi[groups - 1] = *emax;
    for (std::size_t g = 0; g < cuts.size(); ++g) {
        hist.hi[g] = cuts[g];
        hist.lo[g + 1] = cuts[g];
    }

    auto bin_of = [&](double v) {
        return static_cast<std::size_t>(
            std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
    };

    hist.entry_counts.assign(groups, 0);
    for (double v : entries) ++hist.entry_counts[bin_of(v)];

    // Nodes are placed on the same axis by their distance to the smallest width.
    const double gmin = *std::min_element(matrix.gamma.begin(), matrix.gamma.end());
    hist.node_counts.assign(groups, 0);
    for (double g : matrix.gamma) ++hist.node_counts[bin_of(g - gmin)];

    hist.node_pct.resize(groups);
    hist.entry_pct.resize(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        hist.node_pct[g] = 100.0 * static_cast<double>(hist.node_counts[g]) /
                           static_cast<double>(n);
        hist.entry_pct[g] = 100.0 * static_cast<double>(hist.entry_counts[g]) /
                            static_cast<double>(entries.size());
    }
    return hist;
}

std::string matrix_to_csv(const SingularityMatrix& matrix) {
    std::string out = "id";
    for (const auto& id : matrix.ids) {
        out += ',';
        out += id;
    }
    out += '\n';
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        out += matrix.ids[i];
        for (std::size_t j = 0; j < matrix.size(); ++j) {
            out += ',';
            out += format_number(matrix.rho[i][j]);
        }
        out += '\n';
    }
    return out;
}

std::string histogram_to_csv(const RhoHistogram& histogram) {
    std::string out = "group,lo,hi,node_count,node_pct,entry_count,entry_pct\n";
    for (std::size_t g = 0; g < histogram.group_labels.size(); ++g) {
        out += histogram.group_labels[g];
        out += ',';
        out += format_number(histogram.lo[g]);
        out += ',';
        out += format_number(histogram.hi[g]);
        out += ',';
        out += std::to_string(histogram.node_counts[g]);
        out += ',';
        out += format_number(histogram.node_pct[g]);
        out += ',';
        out += std::to_string(histogram.entry_counts[g]);
        out += ',';
        out += format_number(histogram.entry_pct[g]);
        out += '\n';
    }
    return out;
}

}  // namespace wbm
