#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "relukit/multiindex.hpp"

namespace relukit {

// A function on [-1/2, 1/2]^dim together with an analytic derivative oracle
// and its smoothness class data (beta = n + sigma, sup/Hoelder bound).
struct SmoothTarget {
    int dim = 1;
    double beta = 1.0;
    double bound = 1.0;
    std::function<double(const std::vector<double>&)> eval;
    // partial derivative of multi-order alpha at x; consulted for |alpha| <= n
    std::function<double(const Multiindex&, const std::vector<double>&)> derivative;
    // when set, derivatives of order > taylor_degree vanish identically and
    // are never requested from the oracle
    std::optional<int> taylor_degree;

    int holder_n() const;      // integer part: beta = n + sigma, sigma in (0, 1]
    double holder_sigma() const;
};

// chi_{y1 + gamma(y2..yd) >= 0} after the coordinate permutation
// y_i = x[permutation[i]] (0-based), i.e. a jump along one coordinate whose
// graph is shifted by a smooth function of the remaining ones.
struct HorizonTarget {
    SmoothTarget gamma;             // defined on dim-1 variables
    std::vector<int> permutation;   // bijection of {0, .., dim-1}

    int dim() const { return static_cast<int>(permutation.size()); }
    double eval(const std::vector<double>& x) const;
};

// Indicator-type target given per dyadic cell: on cell lambda (0-based index
// per axis, 2^r cells per axis) the set agrees with cell_horizons.at(lambda).
// With smooth_factor present the target is chi_K * g.
struct PiecewiseTarget {
    int dim = 2;
    int r = 1;
    std::map<std::vector<int>, HorizonTarget> cell_horizons;
    std::optional<SmoothTarget> smooth_factor;

    int cells_per_axis() const { return 1 << r; }
    std::vector<int> cell_of(const std::vector<double>& x) const;
    double eval_indicator(const std::vector<double>& x) const;
    double eval(const std::vector<double>& x) const;
    double boundary_beta() const;  // min over cells of gamma.beta
};

// f = outer ∘ feature_map with coordinatewise smooth features mapping
// [-1/2, 1/2]^D into [-1/2, 1/2]^d and L^p composition norm kappa.
struct CompositeTarget {
    PiecewiseTarget outer;
    std::vector<SmoothTarget> feature_map;  // d coordinates on D variables
    double kappa = 1.0;

    int input_dim() const;
    double eval(const std::vector<double>& x) const;
};

// Built-in families.
SmoothTarget make_constant_target(int dim, double beta, double bound, double value);
SmoothTarget make_sine_target(int dim, double beta, double bound, double amplitude, double omega,
                              double phase);
// sum of c * x^alpha terms; beta/bound as declared by the caller
SmoothTarget make_polynomial_target(int dim, double beta, double bound,
                                    const std::vector<std::pair<Multiindex, double>>& terms);
SmoothTarget make_projection_target(int dim, int coordinate);

std::vector<int> identity_permutation(int d);
// permutation putting `axis` first and keeping the rest in order
std::vector<int> axis_first_permutation(int d, int axis);

HorizonTarget make_constant_horizon(int dim, double shift, double beta, double bound,
                                    std::vector<int> permutation);
// all cells carry the same horizon descriptor
PiecewiseTarget make_uniform_piecewise(int dim, int r, const HorizonTarget& h);
PiecewiseTarget make_half_space_indicator(int dim, int r, int axis);  // {x_axis >= 0}
PiecewiseTarget make_full_cube_indicator(int dim, int r);
PiecewiseTarget make_empty_indicator(int dim, int r);

}  // namespace relukit
