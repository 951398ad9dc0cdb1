#pragma once

#include <functional>
#include <string>

#include "relukit/network.hpp"

namespace relukit {

// {"input_dim": d, "layers": [{"rows": r, "cols": c,
//   "entries": [[i, j, value], ...], "bias": [[i, value], ...]}, ...]}
// 0-based indices, entries sorted lexicographically.
std::string network_to_json(const Network& net);
Network network_from_json(const std::string& text);

void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);

// A parsed target specification: how to construct the network at a given
// accuracy, the ground-truth function, and metadata for sweep reports.
struct TargetSpec {
    std::string name;
    int dim = 1;                    // evaluation domain dimension
    double domain_half_width = 0.5; // cube half-width for error measurement
    bool sup_norm = false;          // measure sup over a grid instead of L^p
    std::function<Network(double eps, double p)> build;
    std::function<double(const std::vector<double>&)> truth;
    std::function<double(double p)> rate;  // theoretical weight-rate exponent, NaN if n/a
};

TargetSpec parse_target_spec(const std::string& json_text);
TargetSpec load_target_spec(const std::string& path);

}  // namespace relukit
