#include "wbm/series.hpp"

#include "wbm/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace wbm {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

void check_ids_unique(const SeriesBundle& bundle, const std::string& origin) {
    std::unordered_set<std::string> seen;
    for (const auto& e : bundle.entries) {
        if (!seen.insert(e.id).second)
            throw std::runtime_error(origin + ": duplicate series id '" + e.id + "'");
    }
}

void check_lengths_and_positivity(const SeriesBundle& bundle, const std::string& origin) {
    for (const auto& e : bundle.entries) {
        if (e.values.size() < kMinSeriesLength)
            throw std::runtime_error(origin + ": series '" + e.id + "' has " +
                                     std::to_string(e.values.size()) +
                                     " samples, minimum is " +
                                     std::to_string(kMinSeriesLength));
        if (!bundle.raw_mode) {
            for (double v : e.values) {
                if (!(v > 0.0))
                    throw std::runtime_error(origin + ": series '" + e.id +
                                             "' has a non-positive price");
            }
        }
    }
}

SeriesBundle parse_wide(std::istream& in, const std::string& origin, bool raw_mode) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(origin + ": empty file");
    std::vector<std::string> header = split_csv_line(line);
    for (auto& h : header) h = trim(h);

    bool has_date = !header.empty() && header.front() == "date";
    std::size_t first_series = has_date ? 1 : 0;
    if (header.size() <= first_series)
        throw std::runtime_error(origin + ": no series columns in header");

    SeriesBundle bundle;
    bundle.raw_mode = raw_mode;
    for (std::size_t c = first_series; c < header.size(); ++c) {
        if (header[c].empty())
            throw std::runtime_error(origin + ": empty column name in header");
        bundle.entries.push_back({header[c], {}});
    }

    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (has_date) bundle.dates.push_back(fields.empty() ? "" : trim(fields[0]));
        for (std::size_t c = first_series; c < header.size(); ++c) {
            if (c >= fields.size()) continue;  // short row: missing for trailing series
            double v;
            if (!parse_double(fields[c], v)) {
                if (trim(fields[c]).empty()) continue;  // missing: skip for this series
                throw std::runtime_error(origin + ": bad numeric value '" +
                                         trim(fields[c]) + "' in column '" +
                                         header[c] + "'");
            }
            bundle.entries[c - first_series].values.push_back(v);
        }
    }
    return bundle;
}

SeriesBundle parse_long(std::istream& in, const std::string& origin, bool raw_mode) {
    SeriesBundle bundle;
    bundle.raw_mode = raw_mode;
    std::unordered_map<std::string, std::size_t> index;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() < 2)
            throw std::runtime_error(origin + ": long format needs id,value rows");
        double v;
        if (!parse_double(fields[1], v)) {
            if (first) { first = false; continue; }  // header row
            if (trim(fields[1]).empty()) { first = false; continue; }  // missing value
            throw std::runtime_error(origin + ": bad numeric value '" +
                                     trim(fields[1]) + "'");
        }
        first = false;
        const std::string id = trim(fields[0]);
        if (id.empty())
            throw std::runtime_error(origin + ": empty id in long format row");
        auto [it, inserted] = index.try_emplace(id, bundle.entries.size());
        if (inserted) bundle.entries.push_back({id, {}});
        bundle.entries[it->second].values.push_back(v);
    }
    return bundle;
}

}  // namespace

BundleFormat parse_bundle_format(const std::string& text) {
    if (text == "wide_csv" || text == "wide") return BundleFormat::WideCsv;
    if (text == "long_csv" || text == "long") return BundleFormat::LongCsv;
    if (text == "raw_signal" || text == "raw") return BundleFormat::RawSignal;
    throw std::invalid_argument("unknown bundle format: " + text);
}

const char* bundle_format_label(BundleFormat format) {
    switch (format) {
        case BundleFormat::WideCsv: return "wide_csv";
        case BundleFormat::LongCsv: return "long_csv";
        case BundleFormat::RawSignal: return "raw_signal";
    }
    return "?";
}

SeriesBundle parse_bundle(std::istream& in, BundleFormat format, const std::string& origin) {
    SeriesBundle bundle;
    switch (format) {
        case BundleFormat::WideCsv:
            bundle = parse_wide(in, origin, false);
            break;
        case BundleFormat::LongCsv:
            bundle = parse_long(in, origin, false);
            break;
        case BundleFormat::RawSignal:
            bundle = parse_wide(in, origin, true);
            break;
    }
    check_ids_unique(bundle, origin);
    check_lengths_and_positivity(bundle, origin);
    return bundle;
}

SeriesBundle load_bundle(const std::string& path, BundleFormat format) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open input file: " + path);
    return parse_bundle(in, format, path);
}

std::string bundle_to_csv(const SeriesBundle& bundle) {
    std::string out;
    const bool has_dates = !bundle.dates.empty();
    if (has_dates) out += "date,";
    for (std::size_t c = 0; c < bundle.entries.size(); ++c) {
        if (c) out += ',';
        out += bundle.entries[c].id;
    }
    out += '\n';
    std::size_t rows = 0;
    for (const auto& e : bundle.entries) rows = std::max(rows, e.values.size());
    for (std::size_t r = 0; r < rows; ++r) {
        if (has_dates) {
            if (r < bundle.dates.size()) out += bundle.dates[r];
            out += ',';
        }
        for (std::size_t c = 0; c < bundle.entries.size(); ++c) {
            if (c) out += ',';
            const auto& vals = bundle.entries[c].values;
            if (r < vals.size()) out += format_number(vals[r]);
        }
        out += '\n';
    }
    return out;
}

void write_bundle_csv(const SeriesBundle& bundle, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write file: " + path);
    out << bundle_to_csv(bundle);
}

ReturnSeries to_returns(const SeriesEntry& entry, bool raw_mode) {
    if (entry.values.size() < 2)
        throw std::invalid_argument("series '" + entry.id + "' too short for returns");

    std::vector<double> r;
    if (raw_mode) {
        r = entry.values;
    } else {
        r.resize(entry.values.size() - 1);
        for (std::size_t t = 0; t + 1 < entry.values.size(); ++t) {
            if (!(entry.values[t] > 0.0) || !(entry.values[t + 1] > 0.0))
                throw std::invalid_argument("series '" + entry.id +
                                            "' has a non-positive price");
            r[t] = std::log(entry.values[t + 1]) - std::log(entry.values[t]);
        }
    }

    const double n = static_cast<double>(r.size());
    double mean = 0.0;
    for (double v : r) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : r) var += (v - mean) * (v - mean);
    var /= n;  // population convention
    const double sigma = std::sqrt(var);
    if (sigma == 0.0 || !std::isfinite(sigma))
        throw DegenerateSeriesError(entry.id);

    ReturnSeries out;
    out.id = entry.id;
    out.raw_mean = mean;
    out.volatility = sigma;
    out.returns.resize(r.size());
    for (std::size_t t = 0; t < r.size(); ++t)
        out.returns[t] = (r[t] - mean) / sigma;
    return out;
}

Profile to_profile(const ReturnSeries& returns) {
    Profile p;
    p.id = returns.id;
    p.values.resize(returns.returns.size());
    double acc = 0.0;
    for (std::size_t t = 0; t < returns.returns.size(); ++t) {
        acc += returns.returns[t];
        p.values[t] = acc;
    }
    return p;
}

}  // namespace wbm
