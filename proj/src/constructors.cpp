#include "relukit/constructors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relukit/calculus.hpp"
#include "relukit/quantization.hpp"

namespace relukit {

namespace {

void check_eps_half(double eps, const char* fn) {
    if (!(eps > 0.0) || !(eps < 0.5))
        throw std::invalid_argument(std::string(fn) + ": eps must lie in (0, 1/2)");
}

Network single_layer(SparseMatrix a, SparseVector b, int input_dim) {
    std::vector<LayerSpec> layers;
    layers.push_back({std::move(a), std::move(b)});
    return Network(input_dim, std::move(layers));
}

}  // namespace

Box::Box(std::vector<double> lo_, std::vector<double> hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.empty() || lo.size() != hi.size()) throw std::invalid_argument("Box: bad endpoint lists");
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!(lo[i] <= hi[i])) throw std::invalid_argument("Box: lo must not exceed hi");
        if (lo[i] < -0.5 || hi[i] > 0.5)
            throw std::invalid_argument("Box: endpoints must lie in [-1/2, 1/2]");
    }
}

Box Box::cube(int d) {
    return Box(std::vector<double>(static_cast<std::size_t>(d), -0.5),
               std::vector<double>(static_cast<std::size_t>(d), 0.5));
}

Network zero_network(int input_dim, int output_dim, int L) {
    if (L < 1) throw std::invalid_argument("zero_network: L must be positive");
    std::vector<LayerSpec> layers;
    int prev = input_dim;
    for (int l = 0; l < L; ++l) {
        int rows = (l == L - 1) ? output_dim : 1;
        layers.push_back({SparseMatrix::zeros(rows, prev), SparseVector::zeros(rows)});
        prev = rows;
    }
    return Network(input_dim, std::move(layers));
}

Network heaviside_network(int d, double eps) {
    if (d < 2) throw std::invalid_argument("heaviside_network: d must be at least 2");
    if (!(eps > 0.0)) throw std::invalid_argument("heaviside_network: eps must be positive");
    SparseMatrix a1 = SparseMatrix::zeros(2, d);
    a1.add(0, 0, 1.0 / eps);
    a1.add(1, 0, 1.0 / eps);
    SparseVector b1 = SparseVector::zeros(2);
    b1.add(1, -1.0);
    SparseMatrix a2 = SparseMatrix::zeros(1, 2);
    a2.add(0, 0, 1.0);
    a2.add(0, 1, -1.0);
    std::vector<LayerSpec> layers;
    layers.push_back({std::move(a1), std::move(b1)});
    layers.push_back({std::move(a2), SparseVector::zeros(1)});
    return Network(d, std::move(layers));
}

Network sawtooth_network(int t) {
    if (t < 0) throw std::invalid_argument("sawtooth_network: t must be nonnegative");
    if (t == 0) return identity_network(1, 2);
    // hidden unit j computes relu(x - j/2^t); output weights reproduce
    //   g_t = 2^t * (relu(x) + sum_k 2 relu(x - 2k/2^t) - sum_l 2 relu(x - (2l-1)/2^t))
    const int width = 1 << t;
    const double scale = std::ldexp(1.0, t);
    SparseMatrix a1 = SparseMatrix::zeros(width, 1);
    SparseVector b1 = SparseVector::zeros(width);
    for (int j = 0; j < width; ++j) {
        a1.add(j, 0, 1.0);
        if (j > 0) b1.add(j, -std::ldexp(static_cast<double>(j), -t));
    }
    SparseMatrix a2 = SparseMatrix::zeros(1, width);
    for (int j = 0; j < width; ++j) {
        double w = (j == 0) ? scale : (j % 2 == 0 ? 2.0 * scale : -2.0 * scale);
        a2.add(0, j, w);
    }
    std::vector<LayerSpec> layers;
    layers.push_back({std::move(a1), std::move(b1)});
    layers.push_back({std::move(a2), SparseVector::zeros(1)});
    return Network(1, std::move(layers));
}

Network sawtooth_network(int t, int block_t) {
    if (block_t < 1) throw std::invalid_argument("sawtooth_network: block_t must be positive");
    if (t <= block_t) return sawtooth_network(t);
    const int k = t / block_t;
    const int r = t % block_t;
    Network net = sawtooth_network(r);
    for (int i = 0; i < k; ++i) net = sparse_concatenate(sawtooth_network(block_t), net);
    return net;
}

Network square_network(int m, int L) {
    if (m < 1 || L < 1) throw std::invalid_argument("square_network: m and L must be positive");
    const int N = (m + L - 1) / L;
    const int branch_depth = 2 * L + 3;

    std::vector<Network> branches;
    branches.push_back(identity_network(1, branch_depth));
    for (int t = 1; t <= m; ++t) {
        const int k = t / N;
        const int r = t % N;
        Network g = sawtooth_network(r);
        for (int i = 0; i < k; ++i) g = sparse_concatenate(sawtooth_network(N), g);
        branches.push_back(pad_depth(g, branch_depth));
    }
    Network psi = parallelize_many(branches);

    SparseMatrix a_sum = SparseMatrix::zeros(1, m + 1);
    a_sum.add(0, 0, 1.0);
    for (int t = 1; t <= m; ++t) a_sum.add(0, t, -std::ldexp(1.0, -2 * t));
    return sparse_concatenate(single_layer(std::move(a_sum), SparseVector::zeros(1), m + 1), psi);
}

int multiplication_quant_s(double M_bound) {
    if (!(M_bound >= 1.0))
        throw std::invalid_argument("multiplication_quant_s: M_bound must be >= 1");
    const int s0 = 1 + static_cast<int>(std::ceil(std::log2(M_bound)));
    return 3 + 4 * s0;
}

Network multiplication_network(double M_bound, double eps, int L) {
    if (!(M_bound >= 1.0))
        throw std::invalid_argument("multiplication_network: M_bound must be >= 1");
    check_eps_half(eps, "multiplication_network");
    if (L < 1) throw std::invalid_argument("multiplication_network: L must be positive");

    const int s0 = 1 + static_cast<int>(std::ceil(std::log2(M_bound)));
    const int m = s0 + (ceil_log2_inv(eps) + 1) / 2;
    const double inv_m0 = std::ldexp(1.0, -s0);

    Network sq = square_network(m, L);  // 2L + 4 layers

    // 2-layer front ends mapping (x, y) to |x+y|/M0, |x|/M0, |y|/M0.
    auto abs_front = [&](std::vector<std::pair<int, double>> row) {
        SparseMatrix a1 = SparseMatrix::zeros(2, 2);
        for (auto [col, w] : row) {
            a1.add(0, col, w);
            a1.add(1, col, -w);
        }
        SparseMatrix a2 = SparseMatrix::zeros(1, 2);
        a2.add(0, 0, inv_m0);
        a2.add(0, 1, inv_m0);
        std::vector<LayerSpec> layers;
        layers.push_back({std::move(a1), SparseVector::zeros(2)});
        layers.push_back({std::move(a2), SparseVector::zeros(1)});
        return Network(2, std::move(layers));
    };

    std::vector<Network> branches;
    branches.push_back(sparse_concatenate(sq, abs_front({{0, 1.0}, {1, 1.0}})));
    branches.push_back(sparse_concatenate(sq, abs_front({{0, 1.0}})));
    branches.push_back(sparse_concatenate(sq, abs_front({{1, 1.0}})));
    Network par = parallelize_many(branches);  // (f(|x+y|/M0), f(|x|/M0), f(|y|/M0)), 2L+6 layers

    // (a, u, v) -> (M0^2/2) * (a - (u + v)); pairing u + v first keeps the
    // result exactly symmetric in (x, y) and exactly zero when x*y = 0.
    SparseMatrix c1 = SparseMatrix::zeros(2, 3);
    c1.add(0, 0, 1.0);
    c1.add(1, 1, 1.0);
    c1.add(1, 2, 1.0);
    SparseMatrix c2 = SparseMatrix::zeros(1, 2);
    const double half_m0_sq = std::ldexp(1.0, 2 * s0 - 1);
    c2.add(0, 0, half_m0_sq);
    c2.add(0, 1, -half_m0_sq);
    std::vector<LayerSpec> comb_layers;
    comb_layers.push_back({std::move(c1), SparseVector::zeros(2)});
    comb_layers.push_back({std::move(c2), SparseVector::zeros(1)});
    Network comb(3, std::move(comb_layers));

    Network core = concatenate(comb, par);  // 2L + 7 layers
    return pad_depth(core, 2 * L + 8);
}

Network monomial_network(const Multiindex& alpha, double eps, int ell) {
    const int d = static_cast<int>(alpha.size());
    if (d < 1) throw std::invalid_argument("monomial_network: empty multiindex");
    for (int v : alpha)
        if (v < 0) throw std::invalid_argument("monomial_network: negative exponent");
    check_eps_half(eps, "monomial_network");
    if (ell < 1) throw std::invalid_argument("monomial_network: ell must be positive");

    const int k = mi_order(alpha);
    if (k == 0) {
        SparseVector b = SparseVector::zeros(1);
        b.add(0, 1.0);
        return single_layer(SparseMatrix::zeros(1, d), std::move(b), d);
    }
    if (k == 1) {
        int j = 0;
        while (alpha[static_cast<std::size_t>(j)] == 0) ++j;
        SparseMatrix a = SparseMatrix::zeros(1, d);
        a.add(0, j, 1.0);
        return single_layer(std::move(a), SparseVector::zeros(1), d);
    }

    // split alpha = a1 + a2 with |a2| = 2^(ceil(log2 k) - 1)
    int half = 1;
    while (2 * half < k) half *= 2;
    Multiindex a2(alpha.size(), 0);
    int remaining = half;
    for (std::size_t i = 0; i < alpha.size() && remaining > 0; ++i) {
        int take = std::min(alpha[i], remaining);
        a2[i] = take;
        remaining -= take;
    }
    Multiindex a1(alpha.size(), 0);
    for (std::size_t i = 0; i < alpha.size(); ++i) a1[i] = alpha[i] - a2[i];

    const double child_eps = eps / 6.0;
    Network phi1 = monomial_network(a1, child_eps, ell);
    Network phi2 = monomial_network(a2, child_eps, ell);
    const int mul_L = 1 + ell / (2 * d);
    Network times = multiplication_network(2.0, child_eps, mul_L);
    return sparse_concatenate(times, parallelize(phi1, phi2));
}

Network polynomial_unit(const std::vector<std::map<Multiindex, double>>& coeffs,
                        const std::vector<std::vector<double>>& base_points, double eps,
                        double beta, double B) {
    check_eps_half(eps, "polynomial_unit");
    if (!(beta > 0.0)) throw std::invalid_argument("polynomial_unit: beta must be positive");
    if (!(B > 0.0)) throw std::invalid_argument("polynomial_unit: B must be positive");
    const std::size_t m = base_points.size();
    if (m == 0 || coeffs.size() != m)
        throw std::invalid_argument("polynomial_unit: need one coefficient map per base point");
    const int d = static_cast<int>(base_points[0].size());
    const int n = static_cast<int>(std::ceil(beta)) - 1;  // beta = n + sigma, sigma in (0, 1]

    for (const auto& cmap : coeffs)
        for (const auto& [a, c] : cmap) {
            if (static_cast<int>(a.size()) != d)
                throw std::invalid_argument("polynomial_unit: multiindex dimension mismatch");
            if (mi_order(a) > n)
                throw std::invalid_argument("polynomial_unit: coefficient order exceeds beta");
            if (std::abs(c) > B)
                throw std::invalid_argument("polynomial_unit: coefficient out of [-B, B]");
        }

    // binomial re-expansion around the origin:
    //   sum_a c[l][a] (x - x_l)^a = sum_g ct[l][g] x^g
    std::vector<std::map<Multiindex, double>> ct(m);
    for (std::size_t l = 0; l < m; ++l) {
        std::vector<double> neg_x(base_points[l].size());
        for (std::size_t i = 0; i < neg_x.size(); ++i) neg_x[i] = -base_points[l][i];
        for (const auto& [a, c] : coeffs[l]) {
            if (c == 0.0) continue;
            for (const Multiindex& g : mi_below(a)) {
                Multiindex diff(a.size());
                for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - g[i];
                double term = c * mi_binomial(a, g) * mi_pow(neg_x, diff);
                if (term != 0.0) ct[l][g] += term;
            }
        }
    }

    // shared monomial bank over the gammas that actually occur
    std::vector<Multiindex> gammas;
    for (const Multiindex& g : mi_enumerate(d, n)) {
        bool used = false;
        for (std::size_t l = 0; l < m && !used; ++l) {
            auto it = ct[l].find(g);
            used = it != ct[l].end() && it->second != 0.0;
        }
        if (used) gammas.push_back(g);
    }
    if (gammas.empty()) gammas.push_back(Multiindex(static_cast<std::size_t>(d), 0));
    const int num_gammas = static_cast<int>(gammas.size());

    double C = 1.0;
    for (std::size_t l = 0; l < m; ++l)
        for (const auto& [g, v] : ct[l]) C = std::max(C, std::abs(v));

    // smallest s1 whose grid quantizes the re-expanded coefficients with total
    // drift below eps/4 while covering their range
    int s1 = 0;
    const int g_eps = ceil_log2_inv(eps);
    for (int s = 1; s <= 200 && s1 == 0; ++s) {
        double step = std::ldexp(1.0, -std::min(s * g_eps, 1060));
        if (std::pow(eps, -static_cast<double>(s)) >= C && num_gammas * step / 2.0 <= eps / 4.0)
            s1 = s;
    }
    if (s1 == 0) throw std::runtime_error("polynomial_unit: no quantization level found");
    QuantizationSpec cspec(s1, eps);

    SparseMatrix a_top = SparseMatrix::zeros(static_cast<int>(m), num_gammas);
    for (std::size_t l = 0; l < m; ++l)
        for (int j = 0; j < num_gammas; ++j) {
            auto it = ct[l].find(gammas[static_cast<std::size_t>(j)]);
            if (it == ct[l].end()) continue;
            double q = quantize_value(it->second, cspec);
            if (q != 0.0) a_top.add(static_cast<int>(l), j, q);
        }
    Network phi_a =
        single_layer(std::move(a_top), SparseVector::zeros(static_cast<int>(m)), num_gammas);

    const double delta = eps / (4.0 * C * num_gammas);
    std::vector<Network> bank;
    bank.reserve(gammas.size());
    for (const Multiindex& g : gammas) bank.push_back(monomial_network(g, delta, n + 1));
    Network phi_b = parallelize_many(bank);

    return sparse_concatenate(phi_a, phi_b);
}

namespace {

// Grid exponent for the cutoff interval boundaries: s1 * g as long as the
// resulting ramp slope 2^G keeps every pre-activation sum exact in double
// precision (G <= 40); beyond that the boundary strips stay at width 2^-40,
// which is far below any error tolerance this code can measure.
int cutoff_grid_exponent(int d, double B, double eps, double p) {
    const int p0 = static_cast<int>(std::ceil(p));
    const int s1 = 8 * d + p0 * (1 + 4 * static_cast<int>(std::ceil(B)));
    const int g = ceil_log2_inv(eps);
    const long long verbatim = static_cast<long long>(s1) * g;
    return static_cast<int>(std::min(verbatim, 40LL));
}

}  // namespace

Network cutoff_network(const Box& box, double B, double eps, double p) {
    if (!(B >= 1.0)) throw std::invalid_argument("cutoff_network: B must be >= 1");
    check_eps_half(eps, "cutoff_network");
    if (!(p > 0.0)) throw std::invalid_argument("cutoff_network: p must be positive");
    const int d = box.dim();
    const int G = cutoff_grid_exponent(d, B, eps, p);
    const double step = std::ldexp(1.0, -G);
    const double inv_step = std::ldexp(1.0, G);

    std::vector<double> lo(box.lo.size()), hi(box.hi.size());
    bool degenerate = false;
    for (int i = 0; i < d; ++i) {
        lo[i] = round_to_dyadic(box.lo[i], G);
        hi[i] = round_to_dyadic(box.hi[i], G);
        if (hi[i] - lo[i] < 2.0 * step) degenerate = true;
    }
    if (degenerate) return zero_network(d + 1, 1, 4);

    const int b0_exp = static_cast<int>(std::ceil(std::log2(B)));
    const double b0 = std::ldexp(1.0, b0_exp);
    const double inv_b0 = std::ldexp(1.0, -b0_exp);

    // layer 1: four ramps per coordinate plus relu(+-y / B0)
    SparseMatrix a1 = SparseMatrix::zeros(4 * d + 2, d + 1);
    SparseVector b1 = SparseVector::zeros(4 * d + 2);
    for (int i = 0; i < d; ++i) {
        const double offs[4] = {lo[i], lo[i] + step, hi[i] - step, hi[i]};
        for (int j = 0; j < 4; ++j) {
            a1.add(4 * i + j, i, inv_step);
            double bias = -std::ldexp(offs[j], G);  // exact: offsets are grid multiples
            if (bias != 0.0) b1.add(4 * i + j, bias);
        }
    }
    a1.add(4 * d, d, inv_b0);
    a1.add(4 * d + 1, d, -inv_b0);

    // layer 2: relu(sum_i t_i(x_i) + relu(+-y/B0) - d)
    SparseMatrix a2 = SparseMatrix::zeros(2, 4 * d + 2);
    SparseVector b2 = SparseVector::zeros(2);
    for (int r = 0; r < 2; ++r) {
        for (int i = 0; i < d; ++i) {
            a2.add(r, 4 * i + 0, 1.0);
            a2.add(r, 4 * i + 1, -1.0);
            a2.add(r, 4 * i + 2, -1.0);
            a2.add(r, 4 * i + 3, 1.0);
        }
        a2.add(r, 4 * d + r, 1.0);
        b2.add(r, -static_cast<double>(d));
    }

    SparseMatrix a3 = SparseMatrix::zeros(1, 2);
    a3.add(0, 0, b0);
    a3.add(0, 1, -b0);

    std::vector<LayerSpec> layers;
    layers.push_back({std::move(a1), std::move(b1)});
    layers.push_back({std::move(a2), std::move(b2)});
    layers.push_back({std::move(a3), SparseVector::zeros(1)});
    return pad_depth(Network(d + 1, std::move(layers)), 4);
}

Network cutoff_array(const Network& phi, const std::vector<Box>& boxes, double B, double eps,
                     double p) {
    check_eps_half(eps, "cutoff_array");
    const int d = phi.input_dim();
    const int m = phi.output_dim();
    if (static_cast<int>(boxes.size()) != m)
        throw std::invalid_argument("cutoff_array: need one box per network output");
    for (const Box& b : boxes)
        if (b.dim() != d) throw std::invalid_argument("cutoff_array: box dimension mismatch");

    const double p0 = std::max(1.0, p);
    Network carried = parallelize(identity_network(d, phi.depth()), phi);  // (x, y_1..y_m)

    std::vector<Network> branches;
    branches.reserve(boxes.size());
    for (int l = 0; l < m; ++l) {
        Network gate = cutoff_network(boxes[static_cast<std::size_t>(l)], B,
                                      eps / static_cast<double>(m), p0);
        SparseMatrix pick = SparseMatrix::zeros(d + 1, d + m);
        for (int i = 0; i < d; ++i) pick.add(i, i, 1.0);
        pick.add(d, d + l, 1.0);
        branches.push_back(sparse_concatenate(
            gate, single_layer(std::move(pick), SparseVector::zeros(d + 1), d + m)));
    }
    Network gates = parallelize_many(branches);

    SparseMatrix a_sum = SparseMatrix::zeros(1, m);
    for (int l = 0; l < m; ++l) a_sum.add(0, l, 1.0);
    Network summed = sparse_concatenate(single_layer(std::move(a_sum), SparseVector::zeros(1), m),
                                        sparse_concatenate(gates, carried));
    return summed;
}

}  // namespace relukit
