#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "relukit/network.hpp"

namespace relukit {

// Batched scalar function oracle: fills out[i] for points stored row-major.
using BatchFn = std::function<void(const double* pts, std::size_t n, double* out)>;

BatchFn batch_from_pointwise(int dim, std::function<double(const std::vector<double>&)> f);
// scalar-output networks only
BatchFn batch_from_network(const Network& net);

enum class SampleMethod { grid, monte_carlo };

struct ErrorEstimate {
    double value = 0.0;
    SampleMethod method = SampleMethod::grid;
    long long resolution = 0;  // points per axis (grid) or sample count (MC)
    std::uint64_t seed = 0;
};

// (mean over samples of |f-g|^p)^(1/p) over [-1/2, 1/2]^dim. The grid method
// uses the midpoint rule with resolution points per axis (dim <= 3); the
// Monte-Carlo method draws `resolution` seeded uniform samples. Results are
// deterministic given (method, resolution, seed).
ErrorEstimate lp_error(const BatchFn& f, const BatchFn& g, double p, int dim, SampleMethod method,
                       long long resolution, std::uint64_t seed);

// Number of affine pieces detected on t -> net(x0 + t v) over [t_lo, t_hi]
// by second-difference breakpoint detection; a lower bound on the true count.
long long count_slice_pieces(const Network& net, const std::vector<double>& x0,
                             const std::vector<double>& v, double t_lo, double t_hi,
                             long long resolution, double tol);

// (2/L)^L * (N - 1)^L with L = depth, N = num_neurons: upper bound on the
// slice-affine piece count of a scalar-output network.
double piece_bound(const Network& net);

// Reference asymptotic depth 1 / (2 theta) forced by weight-count rate theta.
double depth_lower_bound(double theta);

// Estimates (||HF_gamma - HF_psi||_Lp, ||gamma - psi||_L1^(1/p)) with a
// shared seeded sample stream; the two sides agree up to Bernoulli noise.
std::pair<double, double> hf_distance_check(
    const std::function<double(const std::vector<double>&)>& gamma,
    const std::function<double(const std::vector<double>&)>& psi, double p, int d,
    long long samples, std::uint64_t seed = 0x9e3779b97f4a7c15ull);

// Minimal L^p([a, b]) distance from f to affine functions: closed-form least
// squares for p = 2, Nelder-Mead seeded from that solution otherwise.
double best_affine_error(const std::function<double(double)>& f, double a, double b, double p,
                         long long resolution);

// Least-squares slope of log M against log(1/eps); needs at least 3 points.
double rate_fit(const std::vector<std::pair<double, double>>& eps_and_M);

}  // namespace relukit
