#pragma once

#include <vector>

#include "galactic/types.hpp"

namespace galactic {

struct MmdSelection {
    std::vector<int> prototypes;   // positions into the cluster list, selection order
    std::vector<int> criticisms;   // positions into the cluster list, selection order
    std::vector<double> mmd2_trace;  // squared MMD after each prototype
    double sigma = 1.0;
    bool clamped = false;  // request exceeded the cluster size
};

// Greedy MMD-Critic over an RBF kernel with the median-distance bandwidth:
// prototypes minimize the squared MMD between the cluster and the selected
// set; criticisms maximize the absolute witness value with a log-det
// diversity term. Ties go to the lowest index.
MmdSelection mmd_critic(const std::vector<TimeSeries>& cluster, int n_prototypes,
                        int n_criticisms);

}  // namespace galactic
