#include "relukit/targets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace {
constexpr double kHalfPi = 1.5707963267948966;
}

namespace relukit {

int SmoothTarget::holder_n() const { return static_cast<int>(std::ceil(beta)) - 1; }

double SmoothTarget::holder_sigma() const { return beta - holder_n(); }

double HorizonTarget::eval(const std::vector<double>& x) const {
    if (x.size() != permutation.size())
        throw std::invalid_argument("HorizonTarget::eval: dimension mismatch");
    std::vector<double> rest(permutation.size() - 1);
    for (std::size_t i = 1; i < permutation.size(); ++i)
        rest[i - 1] = x[static_cast<std::size_t>(permutation[i])];
    double first = x[static_cast<std::size_t>(permutation[0])];
    return first + gamma.eval(rest) >= 0.0 ? 1.0 : 0.0;
}

std::vector<int> PiecewiseTarget::cell_of(const std::vector<double>& x) const {
    const int n = cells_per_axis();
    std::vector<int> cell(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        int c = static_cast<int>(std::floor((x[i] + 0.5) * n));
        cell[i] = std::clamp(c, 0, n - 1);
    }
    return cell;
}

double PiecewiseTarget::eval_indicator(const std::vector<double>& x) const {
    auto it = cell_horizons.find(cell_of(x));
    if (it == cell_horizons.end())
        throw std::invalid_argument("PiecewiseTarget: missing cell descriptor");
    return it->second.eval(x);
}

double PiecewiseTarget::eval(const std::vector<double>& x) const {
    double chi = eval_indicator(x);
    if (!smooth_factor) return chi;
    return chi == 0.0 ? 0.0 : chi * smooth_factor->eval(x);
}

double PiecewiseTarget::boundary_beta() const {
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [cell, h] : cell_horizons) b = std::min(b, h.gamma.beta);
    return std::isfinite(b) ? b : 1.0;
}

int CompositeTarget::input_dim() const {
    if (feature_map.empty()) throw std::invalid_argument("CompositeTarget: empty feature map");
    return feature_map[0].dim;
}

double CompositeTarget::eval(const std::vector<double>& x) const {
    std::vector<double> y(feature_map.size());
    for (std::size_t i = 0; i < feature_map.size(); ++i) y[i] = feature_map[i].eval(x);
    return outer.eval(y);
}

SmoothTarget make_constant_target(int dim, double beta, double bound, double value) {
    SmoothTarget t;
    t.dim = dim;
    t.beta = beta;
    t.bound = bound;
    t.eval = [value](const std::vector<double>&) { return value; };
    t.derivative = [value](const Multiindex& a, const std::vector<double>&) {
        return mi_order(a) == 0 ? value : 0.0;
    };
    t.taylor_degree = 0;
    return t;
}

SmoothTarget make_sine_target(int dim, double beta, double bound, double amplitude, double omega,
                              double phase) {
    SmoothTarget t;
    t.dim = dim;
    t.beta = beta;
    t.bound = bound;
    t.eval = [amplitude, omega, phase](const std::vector<double>& x) {
        return amplitude * std::sin(omega * x[0] + phase);
    };
    t.derivative = [amplitude, omega, phase](const Multiindex& a, const std::vector<double>& x) {
        for (std::size_t i = 1; i < a.size(); ++i)
            if (a[i] != 0) return 0.0;
        const int k = a[0];
        return amplitude * std::pow(omega, k) * std::sin(omega * x[0] + phase + k * kHalfPi);
    };
    return t;
}

SmoothTarget make_polynomial_target(int dim, double beta, double bound,
                                    const std::vector<std::pair<Multiindex, double>>& terms) {
    int degree = 0;
    for (const auto& [a, c] : terms) {
        if (static_cast<int>(a.size()) != dim)
            throw std::invalid_argument("make_polynomial_target: term dimension mismatch");
        degree = std::max(degree, mi_order(a));
    }
    SmoothTarget t;
    t.dim = dim;
    t.beta = beta;
    t.bound = bound;
    t.taylor_degree = degree;
    t.eval = [terms](const std::vector<double>& x) {
        double s = 0.0;
        for (const auto& [a, c] : terms) s += c * mi_pow(x, a);
        return s;
    };
    t.derivative = [terms](const Multiindex& a, const std::vector<double>& x) {
        double s = 0.0;
        for (const auto& [g, c] : terms) {
            if (!mi_leq(a, g)) continue;
            double factor = c;
            Multiindex rem(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
                rem[i] = g[i] - a[i];
                for (int j = 0; j < a[i]; ++j) factor *= (g[i] - j);
            }
            s += factor * mi_pow(x, rem);
        }
        return s;
    };
    return t;
}

SmoothTarget make_projection_target(int dim, int coordinate) {
    if (coordinate < 0 || coordinate >= dim)
        throw std::invalid_argument("make_projection_target: coordinate out of range");
    Multiindex a(static_cast<std::size_t>(dim), 0);
    a[static_cast<std::size_t>(coordinate)] = 1;
    return make_polynomial_target(dim, 2.0, 1.0, {{a, 1.0}});
}

std::vector<int> identity_permutation(int d) {
    std::vector<int> p(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) p[static_cast<std::size_t>(i)] = i;
    return p;
}

std::vector<int> axis_first_permutation(int d, int axis) {
    if (axis < 0 || axis >= d) throw std::invalid_argument("axis_first_permutation: bad axis");
    std::vector<int> p;
    p.push_back(axis);
    for (int i = 0; i < d; ++i)
        if (i != axis) p.push_back(i);
    return p;
}

HorizonTarget make_constant_horizon(int dim, double shift, double beta, double bound,
                                    std::vector<int> permutation) {
    HorizonTarget h;
    h.gamma = make_constant_target(dim - 1, beta, bound, shift);
    h.permutation = std::move(permutation);
    return h;
}

PiecewiseTarget make_uniform_piecewise(int dim, int r, const HorizonTarget& h) {
    PiecewiseTarget pt;
    pt.dim = dim;
    pt.r = r;
    const int n = 1 << r;
    std::vector<int> cell(static_cast<std::size_t>(dim), 0);
    while (true) {
        pt.cell_horizons.emplace(cell, h);
        int i = 0;
        while (i < dim && cell[static_cast<std::size_t>(i)] == n - 1) {
            cell[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i == dim) break;
        ++cell[static_cast<std::size_t>(i)];
    }
    return pt;
}

PiecewiseTarget make_half_space_indicator(int dim, int r, int axis) {
    HorizonTarget h = make_constant_horizon(dim, 0.0, 2.0, std::ldexp(1.0, -20),
                                            axis_first_permutation(dim, axis));
    return make_uniform_piecewise(dim, r, h);
}

PiecewiseTarget make_full_cube_indicator(int dim, int r) {
    HorizonTarget h = make_constant_horizon(dim, 0.5, 2.0, 0.5, identity_permutation(dim));
    return make_uniform_piecewise(dim, r, h);
}

PiecewiseTarget make_empty_indicator(int dim, int r) {
    HorizonTarget h = make_constant_horizon(dim, -0.5, 2.0, 0.5, identity_permutation(dim));
    return make_uniform_piecewise(dim, r, h);
}

}  // namespace relukit
