#pragma once

#include <string>
#include <vector>

namespace galactic {

// One fixed-length univariate series. `id` is the instance index within its
// corpus and is preserved across splits.
struct TimeSeries {
    std::vector<double> values;
    int id = -1;

    int length() const { return static_cast<int>(values.size()); }
};

// A labeled collection of equal-length series. Labels are contiguous cluster
// ids in [0, num_clusters); `label_map[k]` is the original label value that
// was remapped to k.
struct Corpus {
    std::string name;
    std::vector<TimeSeries> series;
    std::vector<int> labels;
    int num_clusters = 0;
    std::vector<long long> label_map;

    std::size_t size() const { return series.size(); }
    int length() const { return series.empty() ? 0 : series.front().length(); }

    std::vector<int> cluster_members(int cluster) const {
        std::vector<int> out;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == cluster) out.push_back(static_cast<int>(i));
        }
        return out;
    }
};

}  // namespace galactic
