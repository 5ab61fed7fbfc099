#include "galactic/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "galactic/error.hpp"
#include "galactic/rng.hpp"

namespace galactic {

namespace {

std::vector<std::string> split_fields(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(field);
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

double parse_cell(const std::string& cell, int row, int col) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &pos);
    } catch (const std::exception&) {
        throw Error(errc::parse, "non-numeric cell at row " + std::to_string(row) +
                                     ", column " + std::to_string(col) + ": '" + cell + "'");
    }
    while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
    if (pos != cell.size()) {
        throw Error(errc::parse, "non-numeric cell at row " + std::to_string(row) +
                                     ", column " + std::to_string(col) + ": '" + cell + "'");
    }
    if (!std::isfinite(v)) {
        throw Error(errc::parse, "non-finite value at row " + std::to_string(row) +
                                     ", column " + std::to_string(col));
    }
    return v;
}

long long parse_label(const std::string& cell, int row) {
    double v = parse_cell(cell, row, 0);
    auto rounded = static_cast<long long>(std::llround(v));
    if (std::abs(v - static_cast<double>(rounded)) > 1e-9) {
        throw Error(errc::parse, "label does not parse as an integer at row " +
                                     std::to_string(row) + ": '" + cell + "'");
    }
    return rounded;
}

std::string stem_of(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

}  // namespace

Corpus load_ucr(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::io, "cannot open dataset file: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        lines.push_back(line);
    }
    if (lines.empty()) throw Error(errc::empty_corpus, "empty dataset file: " + path);

    char delim = lines.front().find('\t') != std::string::npos ? '\t' : ',';

    std::vector<long long> raw_labels;
    std::vector<std::vector<double>> rows;
    std::size_t columns = 0;
    for (int r = 0; r < static_cast<int>(lines.size()); ++r) {
        auto fields = split_fields(lines[static_cast<std::size_t>(r)], delim);
        if (r == 0) {
            columns = fields.size();
            if (columns < 2) throw Error(errc::format, "row 1 has fewer than two columns");
        } else if (fields.size() != columns) {
            throw Error(errc::format, "ragged row at row " + std::to_string(r + 1) + ": expected " +
                                          std::to_string(columns) + " columns, got " +
                                          std::to_string(fields.size()));
        }
        raw_labels.push_back(parse_label(fields[0], r + 1));
        std::vector<double> values(columns - 1);
        for (std::size_t c = 1; c < columns; ++c) {
            values[c - 1] = parse_cell(fields[c], r + 1, static_cast<int>(c));
        }
        rows.push_back(std::move(values));
    }

    std::vector<long long> distinct = raw_labels;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::map<long long, int> remap;
    for (int k = 0; k < static_cast<int>(distinct.size()); ++k) {
        remap[distinct[static_cast<std::size_t>(k)]] = k;
    }

    Corpus corpus;
    corpus.name = stem_of(path);
    corpus.num_clusters = static_cast<int>(distinct.size());
    corpus.label_map = distinct;
    corpus.series.reserve(rows.size());
    corpus.labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        corpus.series.push_back(TimeSeries{std::move(rows[i]), static_cast<int>(i)});
        corpus.labels.push_back(remap.at(raw_labels[i]));
    }
    return corpus;
}

void save_ucr(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(errc::io, "cannot write dataset file: " + path);
    char buf[40];
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        long long original = corpus.label_map.empty()
                                 ? corpus.labels[i]
                                 : corpus.label_map[static_cast<std::size_t>(corpus.labels[i])];
        out << original;
        for (double v : corpus.series[i].values) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << '\t' << buf;
        }
        out << '\n';
    }
    if (!out) throw Error(errc::io, "write failed: " + path);
}

TimeSeries znormalize(const TimeSeries& x) {
    TimeSeries out = x;
    const auto n = static_cast<double>(x.values.size());
    if (x.values.empty()) return out;
    double mean = 0.0;
    for (double v : x.values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : x.values) var += (v - mean) * (v - mean);
    double sd = std::sqrt(var / n);
    if (sd < 1e-8) {
        std::fill(out.values.begin(), out.values.end(), 0.0);
        return out;
    }
    for (double& v : out.values) v = (v - mean) / sd;
    return out;
}

Corpus znormalize(const Corpus& corpus) {
    Corpus out = corpus;
    for (auto& s : out.series) s = znormalize(s);
    return out;
}

SplitResult split(const Corpus& corpus, double train_frac, std::uint64_t seed) {
    if (!(train_frac > 0.0 && train_frac < 1.0)) {
        throw Error(errc::precondition, "train_frac must be in (0, 1)");
    }
    SplitResult result;
    result.train.name = corpus.name;
    result.test.name = corpus.name;
    result.train.num_clusters = corpus.num_clusters;
    result.test.num_clusters = corpus.num_clusters;
    result.train.label_map = corpus.label_map;
    result.test.label_map = corpus.label_map;

    std::vector<int> train_ids;
    std::vector<int> test_ids;
    for (int k = 0; k < corpus.num_clusters; ++k) {
        std::vector<int> members = corpus.cluster_members(k);
        if (members.empty()) continue;
        const int n = static_cast<int>(members.size());
        if (n == 1) {
            result.warnings.push_back("cluster " + std::to_string(k) +
                                      " has a single instance; assigned to train, absent from test");
            train_ids.push_back(members[0]);
            continue;
        }
        Rng rng(mix64(seed ^ static_cast<std::uint64_t>(k)));
        rng.shuffle(members);
        int n_train = static_cast<int>(std::floor(train_frac * static_cast<double>(n)));
        n_train = std::clamp(n_train, 1, n - 1);
        for (int i = 0; i < n; ++i) {
            (i < n_train ? train_ids : test_ids).push_back(members[static_cast<std::size_t>(i)]);
        }
    }
    std::sort(train_ids.begin(), train_ids.end());
    std::sort(test_ids.begin(), test_ids.end());
    for (int i : train_ids) {
        result.train.series.push_back(corpus.series[static_cast<std::size_t>(i)]);
        result.train.labels.push_back(corpus.labels[static_cast<std::size_t>(i)]);
    }
    for (int i : test_ids) {
        result.test.series.push_back(corpus.series[static_cast<std::size_t>(i)]);
        result.test.labels.push_back(corpus.labels[static_cast<std::size_t>(i)]);
    }
    return result;
}

}  // namespace galactic
