#include "relukit/approximators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "relukit/calculus.hpp"
#include "relukit/quantization.hpp"

namespace relukit {

namespace {

void check_eps_half(double eps, const char* fn) {
    if (!(eps > 0.0) || !(eps < 0.5))
        throw std::invalid_argument(std::string(fn) + ": eps must lie in (0, 1/2)");
}

double clip_eps(double eps) { return std::min(eps, 0.49); }

}  // namespace

std::map<Multiindex, double> taylor_coefficients(const SmoothTarget& f,
                                                 const std::vector<double>& x0, int n) {
    if (static_cast<int>(x0.size()) != f.dim)
        throw std::invalid_argument("taylor_coefficients: point dimension mismatch");
    if (!f.derivative) throw std::invalid_argument("taylor_coefficients: no derivative oracle");
    const int order = f.taylor_degree ? std::min(n, *f.taylor_degree) : n;
    std::map<Multiindex, double> out;
    for (const Multiindex& a : mi_enumerate(f.dim, order)) {
        double da = f.derivative(a, x0);
        if (!std::isfinite(da)) throw std::runtime_error("taylor_coefficients: oracle failure");
        out[a] = da / mi_factorial(a);
    }
    return out;
}

Network approximate_smooth(const SmoothTarget& f, double eps, double p) {
    check_eps_half(eps, "approximate_smooth");
    if (!(p > 0.0)) throw std::invalid_argument("approximate_smooth: p must be positive");
    const int d = f.dim;
    const int n = f.holder_n();
    const double B = f.bound;
    if (!(B > 0.0)) throw std::invalid_argument("approximate_smooth: bound must be positive");

    // cells per axis; N = ceil((eps / (4 C B d^beta))^(-1/beta)) with
    // C = d^n, computed in log space so large orders stay finite
    const double log_denom = std::log(4.0) + n * std::log(static_cast<double>(d)) + std::log(B) +
                             f.beta * std::log(static_cast<double>(d));
    const double logN = (log_denom - std::log(eps)) / f.beta;
    if (logN > std::log(2e6)) throw std::runtime_error("approximate_smooth: cell count too large");
    const int N = std::max(1, static_cast<int>(std::ceil(std::exp(logN))));
    double total_cells = std::pow(static_cast<double>(N), d);
    if (total_cells > 2e6) throw std::runtime_error("approximate_smooth: cell count too large");

    const int m = static_cast<int>(total_cells);
    std::vector<std::vector<double>> centers;
    std::vector<Box> cells;
    centers.reserve(static_cast<std::size_t>(m));
    cells.reserve(static_cast<std::size_t>(m));
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    while (true) {
        std::vector<double> lo(static_cast<std::size_t>(d)), hi(lo.size()), c(lo.size());
        for (int i = 0; i < d; ++i) {
            lo[static_cast<std::size_t>(i)] = static_cast<double>(idx[static_cast<std::size_t>(i)]) / N - 0.5;
            hi[static_cast<std::size_t>(i)] = static_cast<double>(idx[static_cast<std::size_t>(i)] + 1) / N - 0.5;
            c[static_cast<std::size_t>(i)] =
                (lo[static_cast<std::size_t>(i)] + hi[static_cast<std::size_t>(i)]) / 2.0;
        }
        centers.push_back(std::move(c));
        cells.emplace_back(std::move(lo), std::move(hi));
        int i = 0;
        while (i < d && idx[static_cast<std::size_t>(i)] == N - 1) {
            idx[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i == d) break;
        ++idx[static_cast<std::size_t>(i)];
    }

    std::vector<std::map<Multiindex, double>> coeffs;
    coeffs.reserve(centers.size());
    for (const auto& c : centers) coeffs.push_back(taylor_coefficients(f, c, n));

    Network unit = polynomial_unit(coeffs, centers, eps / 4.0, f.beta, B);

    // the local Taylor polynomials stay within B + eps/4 on their own cells,
    // so an integer bound of ceil(B) + 1 saturates nothing that matters
    const double B1 = std::ceil(B) + 1.0;
    Network bounded = clamp_network(unit, B1);
    Network arr = cutoff_array(bounded, cells, B1, eps / 2.0, std::ceil(p));
    return clamp_network(arr, B);
}

Network precompose_columns(const Network& net, int new_input_dim,
                           const std::vector<int>& col_map) {
    if (static_cast<int>(col_map.size()) != net.input_dim())
        throw std::invalid_argument("precompose_columns: map length mismatch");
    for (int c : col_map)
        if (c < 0 || c >= new_input_dim)
            throw std::invalid_argument("precompose_columns: column out of range");
    std::vector<LayerSpec> layers = net.layers();
    SparseMatrix first = SparseMatrix::zeros(layers[0].matrix.rows, new_input_dim);
    for (const MatrixEntry& e : layers[0].matrix.entries)
        first.entries.push_back({e.row, col_map[static_cast<std::size_t>(e.col)], e.value});
    first.normalize();
    layers[0].matrix = std::move(first);
    return Network(new_input_dim, std::move(layers));
}

Network approximate_horizon(const HorizonTarget& f, double eps, double p) {
    check_eps_half(eps, "approximate_horizon");
    if (!(p > 0.0)) throw std::invalid_argument("approximate_horizon: p must be positive");
    const int d = f.dim();
    if (d < 2) throw std::invalid_argument("approximate_horizon: dimension must be >= 2");
    if (f.gamma.dim != d - 1)
        throw std::invalid_argument("approximate_horizon: gamma dimension mismatch");
    {
        std::vector<bool> seen(static_cast<std::size_t>(d), false);
        for (int v : f.permutation) {
            if (v < 0 || v >= d || seen[static_cast<std::size_t>(v)])
                throw std::invalid_argument("approximate_horizon: permutation is not a bijection");
            seen[static_cast<std::size_t>(v)] = true;
        }
    }

    const double budget = 0.5 * std::pow(eps / 4.0, p);
    Network gamma_net = approximate_smooth(f.gamma, clip_eps(budget), 1.0);
    const int K = gamma_net.depth();

    // identity branch carries the permuted input alongside gamma(y_2..y_d)
    std::vector<int> id_map(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) id_map[static_cast<std::size_t>(i)] = f.permutation[static_cast<std::size_t>(i)];
    Network carry = precompose_columns(identity_network(d, K), d, id_map);

    std::vector<int> rest_map(static_cast<std::size_t>(d - 1));
    for (int i = 1; i < d; ++i)
        rest_map[static_cast<std::size_t>(i - 1)] = f.permutation[static_cast<std::size_t>(i)];
    Network gamma_on_x = precompose_columns(gamma_net, d, rest_map);

    Network par = parallelize(carry, gamma_on_x);  // (y, gamma_eps(y_hat))

    SparseMatrix shift = SparseMatrix::zeros(d, d + 1);
    shift.add(0, 0, 1.0);
    shift.add(0, d, 1.0);
    for (int i = 1; i < d; ++i) shift.add(i, i, 1.0);
    std::vector<LayerSpec> shift_layers;
    shift_layers.push_back({std::move(shift), SparseVector::zeros(d)});
    Network shifted = concatenate(Network(d + 1, std::move(shift_layers)), par);

    // largest power of two inside [ (eps/4)^p / 4, (eps/4)^p / 2 ]; capped at
    // 2^-50 so the jump slope stays inside the exact double window
    const int k = std::min(50, static_cast<int>(std::ceil(1.0 + p * std::log2(4.0 / eps))));
    const double eps_prime = std::ldexp(1.0, -k);
    return sparse_concatenate(heaviside_network(d, eps_prime), shifted);
}

Network approximate_indicator(const PiecewiseTarget& K, double eps, double p) {
    check_eps_half(eps, "approximate_indicator");
    if (!(p > 0.0)) throw std::invalid_argument("approximate_indicator: p must be positive");
    const int d = K.dim;
    const int per_axis = K.cells_per_axis();
    const double q = std::max(1.0, 1.0 / p);
    const double cell_eps = eps / std::pow(2.0, 1.0 + q + K.r * d * q);

    std::vector<Network> horizon_nets;
    std::vector<Box> cells;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    while (true) {
        auto it = K.cell_horizons.find(idx);
        if (it == K.cell_horizons.end())
            throw std::invalid_argument("approximate_indicator: missing cell descriptor");
        horizon_nets.push_back(approximate_horizon(it->second, clip_eps(cell_eps), p));
        std::vector<double> lo(static_cast<std::size_t>(d)), hi(lo.size());
        for (int i = 0; i < d; ++i) {
            lo[static_cast<std::size_t>(i)] =
                static_cast<double>(idx[static_cast<std::size_t>(i)]) / per_axis - 0.5;
            hi[static_cast<std::size_t>(i)] =
                static_cast<double>(idx[static_cast<std::size_t>(i)] + 1) / per_axis - 0.5;
        }
        cells.emplace_back(std::move(lo), std::move(hi));
        int i = 0;
        while (i < d && idx[static_cast<std::size_t>(i)] == per_axis - 1) {
            idx[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i == d) break;
        ++idx[static_cast<std::size_t>(i)];
    }

    Network phi = parallelize_many(horizon_nets);
    Network arr = cutoff_array(phi, cells, 1.0, eps / std::pow(2.0, 1.0 + q), p);
    return clamp_network(arr, 1.0);
}

Network approximate_piecewise_smooth(const PiecewiseTarget& f, double eps, double p) {
    check_eps_half(eps, "approximate_piecewise_smooth");
    if (!f.smooth_factor)
        throw std::invalid_argument("approximate_piecewise_smooth: smooth factor missing");
    const SmoothTarget& g = *f.smooth_factor;
    const double q = std::max(1.0, 1.0 / p);
    const double B = std::max(g.bound, 1e-9);

    Network ind = approximate_indicator(f, clip_eps(eps / (3.0 * std::pow(4.0, q) * B)), p);
    Network smo = approximate_smooth(g, clip_eps(eps / (3.0 * std::pow(4.0, q))), p);

    const double beta0 = std::max(f.boundary_beta(), g.beta);
    const int mul_L = 1 + static_cast<int>(beta0 / (2.0 * f.dim));
    Network times =
        multiplication_network(std::ceil(B), clip_eps(eps / (3.0 * std::pow(2.0, q))), mul_L);

    Network prod = sparse_concatenate(times, parallelize(ind, smo));
    return clamp_network(prod, std::max(g.bound, 0.5));
}

double lipschitz_bound_log2(const Network& net) {
    double total = 0.0;
    for (const LayerSpec& layer : net.layers()) {
        std::vector<double> row_sums(static_cast<std::size_t>(layer.matrix.rows), 0.0);
        for (const MatrixEntry& e : layer.matrix.entries)
            row_sums[static_cast<std::size_t>(e.row)] += std::abs(e.value);
        double norm = 0.0;
        for (double v : row_sums) norm = std::max(norm, v);
        if (norm == 0.0) return -std::numeric_limits<double>::infinity();
        total += std::log2(norm);
    }
    return total;
}

Network approximate_composite(const CompositeTarget& f, double eps, double p) {
    check_eps_half(eps, "approximate_composite");
    if (!(p > 0.0)) throw std::invalid_argument("approximate_composite: p must be positive");
    const int d = f.outer.dim;
    const int D = f.input_dim();
    if (static_cast<int>(f.feature_map.size()) != d)
        throw std::invalid_argument("approximate_composite: feature map must have outer dim coords");
    if (!(f.kappa > 0.0)) throw std::invalid_argument("approximate_composite: kappa must be positive");

    const double q = std::max(1.0, 1.0 / p);
    const double outer_eps = clip_eps(eps / (std::pow(2.0, q) * f.kappa));
    Network outer = f.outer.smooth_factor ? approximate_piecewise_smooth(f.outer, outer_eps, p)
                                          : approximate_indicator(f.outer, outer_eps, p);

    const double lip_log2 = lipschitz_bound_log2(outer);
    const int T = std::max(1, static_cast<int>(std::ceil(lip_log2 / std::log2(1.0 / eps))));

    const double inner_eps = std::pow(eps, T + 1.0) / std::pow(2.0 * d, q);
    if (!(inner_eps > 0.0))
        throw std::runtime_error("approximate_composite: inner tolerance underflows");

    const double beta0 =
        std::ceil(f.outer.boundary_beta() * D * (T + 1.0) / (p * (d - 1.0)));
    std::vector<Network> coord_nets;
    coord_nets.reserve(f.feature_map.size());
    for (const SmoothTarget& tau : f.feature_map) {
        if (tau.dim != D)
            throw std::invalid_argument("approximate_composite: feature coordinate dim mismatch");
        if (!tau.taylor_degree && tau.beta < beta0)
            throw std::invalid_argument(
                "approximate_composite: feature map lacks derivatives of order " +
                std::to_string(static_cast<long long>(beta0)));
        SmoothTarget lifted = tau;
        lifted.beta = beta0;
        coord_nets.push_back(approximate_smooth(lifted, clip_eps(inner_eps), p));
    }
    Network tau_net = parallelize_many(coord_nets);
    return sparse_concatenate(outer, tau_net);
}

}  // namespace relukit
