#pragma once

#include "relukit/constructors.hpp"
#include "relukit/network.hpp"
#include "relukit/targets.hpp"

namespace relukit {

// Taylor coefficients c_alpha = d^alpha f(x0) / alpha! for |alpha| <= n,
// skipping orders the target declares to vanish.
std::map<Multiindex, double> taylor_coefficients(const SmoothTarget& f,
                                                 const std::vector<double>& x0, int n);

// L^p approximation of a smooth target on the cube: dyadic cells, local
// Taylor polynomials through one shared polynomial unit, box cutoffs, final
// saturation to the class bound. Depth depends only on (d, beta), not eps.
Network approximate_smooth(const SmoothTarget& f, double eps, double p);

// Heaviside jump composed with a shift by an approximate smooth graph;
// realization lies in [0, 1] on all of R^d.
Network approximate_horizon(const HorizonTarget& f, double eps, double p);

// Indicator of a locally-horizon set: per-cell horizon nets, cutoffs over the
// dyadic cells, saturation to 1.
Network approximate_indicator(const PiecewiseTarget& K, double eps, double p);

// chi_K * g via an approximate multiplication of the indicator and smooth
// pipelines; requires the smooth_factor to be present.
Network approximate_piecewise_smooth(const PiecewiseTarget& f, double eps, double p);

// Outer piecewise target composed with a coordinatewise smooth feature map;
// the inner accuracy is driven by a layerwise Lipschitz overestimate of the
// outer network.
Network approximate_composite(const CompositeTarget& f, double eps, double p);

// log2 of the product of layerwise infinity operator norms; an upper bound
// for log2 of the Lipschitz constant of the realization.
double lipschitz_bound_log2(const Network& net);

// Re-indexes the first-layer columns so the network reads its inputs from the
// positions given by col_map inside a wider input vector.
Network precompose_columns(const Network& net, int new_input_dim,
                           const std::vector<int>& col_map);

}  // namespace relukit
