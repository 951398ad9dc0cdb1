#pragma once

#include "relukit/network.hpp"

namespace relukit {

// Composition first ∘ second with L1 + L2 - 1 layers; the merged middle layer
// multiplies the adjacent affine maps, dropping entries that cancel to zero.
Network concatenate(const Network& first, const Network& second);

// L-layer network realizing the identity on R^d with at most 2dL weights in
// {-1, 1}. L = 1 yields the single affine layer ((Id, 0)).
Network identity_network(int d, int L);

// Composition through a two-layer identity block: exactly L1 + L2 layers and
// M(result) <= 2 M(first) + 2 M(second).
Network sparse_concatenate(const Network& first, const Network& second);

// Stacks the realizations of two networks over a common input. Depths are
// equalized first by pad_depth on the shallower net; for equal depths the
// weight count is exactly additive.
Network parallelize(const Network& first, const Network& second);

// Right-nested parallelization of one or more networks with a common input
// dimension, after padding all of them to the maximum depth.
Network parallelize_many(const std::vector<Network>& nets);

// Pads to target_L layers by sparse-concatenating an identity network on the
// output side; the realization is unchanged on all of R^d.
Network pad_depth(const Network& net, int target_L);

// Applies the componentwise saturation tau_B(y) = sign(y) * min(|y|, ceil(B))
// on top of a network; adds two layers and at most 14 * output_dim weights.
Network clamp_network(const Network& net, double B);

}  // namespace relukit
