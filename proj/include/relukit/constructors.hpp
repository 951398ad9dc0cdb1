#pragma once

#include <map>
#include <optional>

#include "relukit/multiindex.hpp"
#include "relukit/network.hpp"

namespace relukit {

// Axis-aligned box inside [-1/2, 1/2]^d.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    Box(std::vector<double> lo_, std::vector<double> hi_);
    int dim() const { return static_cast<int>(lo.size()); }
    static Box cube(int d);  // the full [-1/2, 1/2]^d
};

// Network with the given shape whose realization is identically zero; all
// hidden widths are 1 and no weights are stored.
Network zero_network(int input_dim, int output_dim, int L);

// Two-layer, five-weight ramp approximation of the Heaviside step in the
// first coordinate: 0 for x1 < 0, x1/eps on [0, eps], 1 for x1 > eps.
Network heaviside_network(int d, double eps);

// Realizes the t-fold composition g_t of the tent map on [0, 1] as a flat
// two-layer network with 2^t hidden units (t >= 1); t = 0 yields a two-layer
// identity. The overload composes out of blocks of at most block_t folds.
Network sawtooth_network(int t);
Network sawtooth_network(int t, int block_t);

// Approximate squaring unit f_m(x) = x - sum_t g_t(x)/4^t on [0, 1] with
// sup error <= 2^(-2-2m), assembled from sawtooth blocks of ceil(m/L) folds
// so the result has exactly 2L + 4 layers.
Network square_network(int m, int L);

// Approximate scalar product on [-M_bound, M_bound]^2 with exactly 2L + 8
// layers: |xy - realization| <= eps and realization(x, y) = 0 whenever
// x*y = 0 (exactly, by construction).
Network multiplication_network(double M_bound, double eps, int L);

// Reported quantization level for multiplication_network: its weights are
// (s, eps)-quantized for s = 3 + 4 * (1 + ceil(log2(M_bound))).
int multiplication_quant_s(double M_bound);

// Network approximating x^alpha on [-1/2, 1/2]^d within eps; ell trades
// depth against the weight-count rate eps^(-d/ell).
Network monomial_network(const Multiindex& alpha, double eps, int ell);

// m-output unit evaluating shifted polynomials sum_{|a|<beta} c[l][a] *
// (x - x_l)^a simultaneously, sharing one monomial bank across outputs.
// Coefficients must lie in [-B, B].
Network polynomial_unit(const std::vector<std::map<Multiindex, double>>& coeffs,
                        const std::vector<std::vector<double>>& base_points, double eps,
                        double beta, double B);

// Four-layer gate on (x, y) that passes y through when x sits inside the
// (slightly shrunken, grid-aligned) box and outputs 0 outside it; always
// |output| <= |y| for |y| <= B. Degenerate shrunken boxes give the zero net.
Network cutoff_network(const Box& box, double B, double eps, double p);

// Combines an m-output network with per-output box cutoffs and sums the
// results: approximates sum_l chi_box[l] * output_l in L^p within eps.
// Depth is exactly 6 + depth(phi).
Network cutoff_array(const Network& phi, const std::vector<Box>& boxes, double B, double eps,
                     double p);

}  // namespace relukit
