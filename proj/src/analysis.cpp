#include "relukit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace relukit {

namespace {

constexpr std::size_t kChunk = 4096;

void for_each_sample(int dim, SampleMethod method, long long resolution, std::uint64_t seed,
                     const std::function<void(const std::vector<double>&, std::size_t)>& body) {
    if (method == SampleMethod::grid) {
        if (dim > 3) throw std::invalid_argument("lp_error: grid sampling supports dim <= 3");
        if (resolution < 1) throw std::invalid_argument("lp_error: resolution must be positive");
        std::vector<long long> idx(static_cast<std::size_t>(dim), 0);
        std::vector<double> pts;
        pts.reserve(kChunk * static_cast<std::size_t>(dim));
        std::size_t count = 0;
        bool done = false;
        while (!done) {
            pts.clear();
            std::size_t in_chunk = 0;
            while (in_chunk < kChunk && !done) {
                for (int i = 0; i < dim; ++i)
                    pts.push_back((idx[static_cast<std::size_t>(i)] + 0.5) / resolution - 0.5);
                ++in_chunk;
                int i = 0;
                while (i < dim && idx[static_cast<std::size_t>(i)] == resolution - 1) {
                    idx[static_cast<std::size_t>(i)] = 0;
                    ++i;
                }
                if (i == dim)
                    done = true;
                else
                    ++idx[static_cast<std::size_t>(i)];
            }
            body(pts, in_chunk);
            count += in_chunk;
        }
        (void)count;
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uni(-0.5, 0.5);
        std::vector<double> pts;
        long long remaining = resolution;
        while (remaining > 0) {
            std::size_t in_chunk = static_cast<std::size_t>(
                std::min<long long>(remaining, static_cast<long long>(kChunk)));
            pts.assign(in_chunk * static_cast<std::size_t>(dim), 0.0);
            for (double& v : pts) v = uni(rng);
            body(pts, in_chunk);
            remaining -= static_cast<long long>(in_chunk);
        }
    }
}

}  // namespace

BatchFn batch_from_pointwise(int dim, std::function<double(const std::vector<double>&)> f) {
    return [dim, f = std::move(f)](const double* pts, std::size_t n, double* out) {
        std::vector<double> x(static_cast<std::size_t>(dim));
        for (std::size_t i = 0; i < n; ++i) {
            for (int j = 0; j < dim; ++j) x[static_cast<std::size_t>(j)] = pts[i * dim + j];
            out[i] = f(x);
        }
    };
}

BatchFn batch_from_network(const Network& net) {
    if (net.output_dim() != 1)
        throw std::invalid_argument("batch_from_network: scalar output required");
    return [net](const double* pts, std::size_t n, double* out) {
        std::vector<double> vals = net.realize_batch(pts, n);
        std::copy(vals.begin(), vals.end(), out);
    };
}

ErrorEstimate lp_error(const BatchFn& f, const BatchFn& g, double p, int dim, SampleMethod method,
                       long long resolution, std::uint64_t seed) {
    if (!(p > 0.0)) throw std::invalid_argument("lp_error: p must be positive");
    double acc = 0.0;
    long long count = 0;
    std::vector<double> fv(kChunk), gv(kChunk);
    for_each_sample(dim, method, resolution, seed,
                    [&](const std::vector<double>& pts, std::size_t n) {
                        f(pts.data(), n, fv.data());
                        g(pts.data(), n, gv.data());
                        for (std::size_t i = 0; i < n; ++i)
                            acc += std::pow(std::abs(fv[i] - gv[i]), p);
                        count += static_cast<long long>(n);
                    });
    ErrorEstimate est;
    est.value = count > 0 ? std::pow(acc / count, 1.0 / p) : 0.0;
    est.method = method;
    est.resolution = resolution;
    est.seed = seed;
    return est;
}

long long count_slice_pieces(const Network& net, const std::vector<double>& x0,
                             const std::vector<double>& v, double t_lo, double t_hi,
                             long long resolution, double tol) {
    if (net.output_dim() != 1)
        throw std::invalid_argument("count_slice_pieces: scalar output required");
    if (x0.size() != v.size() || static_cast<int>(x0.size()) != net.input_dim())
        throw std::invalid_argument("count_slice_pieces: dimension mismatch");
    if (resolution < 4) throw std::invalid_argument("count_slice_pieces: resolution too small");
    if (!(t_hi > t_lo)) throw std::invalid_argument("count_slice_pieces: empty interval");

    const long long n = resolution;
    const double h = (t_hi - t_lo) / static_cast<double>(n);
    const std::size_t d = x0.size();
    std::vector<double> pts((static_cast<std::size_t>(n) + 1) * d);
    for (long long i = 0; i <= n; ++i) {
        double t = t_lo + h * static_cast<double>(i);
        for (std::size_t j = 0; j < d; ++j)
            pts[static_cast<std::size_t>(i) * d + j] = x0[j] + t * v[j];
    }
    std::vector<double> y = net.realize_batch(pts.data(), static_cast<std::size_t>(n) + 1);

    long long pieces = 1;
    double prev_slope = (y[1] - y[0]) / h;
    for (long long i = 1; i < n; ++i) {
        double slope = (y[static_cast<std::size_t>(i) + 1] - y[static_cast<std::size_t>(i)]) / h;
        double scale = std::max({1.0, std::abs(slope), std::abs(prev_slope)});
        if (std::abs(slope - prev_slope) > tol * scale) ++pieces;
        prev_slope = slope;
    }
    return pieces;
}

double piece_bound(const Network& net) {
    if (net.output_dim() != 1) throw std::invalid_argument("piece_bound: scalar output required");
    const double L = static_cast<double>(net.depth());
    const double N = static_cast<double>(net.num_neurons());
    return std::pow(2.0 / L, L) * std::pow(N - 1.0, L);
}

double depth_lower_bound(double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("depth_lower_bound: theta must be positive");
    return 1.0 / (2.0 * theta);
}

std::pair<double, double> hf_distance_check(
    const std::function<double(const std::vector<double>&)>& gamma,
    const std::function<double(const std::vector<double>&)>& psi, double p, int d,
    long long samples, std::uint64_t seed) {
    if (d < 2) throw std::invalid_argument("hf_distance_check: d must be >= 2");
    if (!(p > 0.0)) throw std::invalid_argument("hf_distance_check: p must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-0.5, 0.5);
    double lhs_acc = 0.0;
    double rhs_acc = 0.0;
    std::vector<double> hat(static_cast<std::size_t>(d - 1));
    for (long long i = 0; i < samples; ++i) {
        double x1 = uni(rng);
        for (double& v : hat) v = uni(rng);
        double gv = gamma(hat);
        double pv = psi(hat);
        double hf_g = x1 + gv >= 0.0 ? 1.0 : 0.0;
        double hf_p = x1 + pv >= 0.0 ? 1.0 : 0.0;
        lhs_acc += std::abs(hf_g - hf_p);  // |diff|^p = |diff| for 0/1 values
        rhs_acc += std::abs(gv - pv);
    }
    double lhs = std::pow(lhs_acc / samples, 1.0 / p);
    double rhs = std::pow(rhs_acc / samples, 1.0 / p);
    return {lhs, rhs};
}

double best_affine_error(const std::function<double(double)>& f, double a, double b, double p,
                         long long resolution) {
    if (!(b > a)) throw std::invalid_argument("best_affine_error: degenerate interval");
    if (!(p > 0.0)) throw std::invalid_argument("best_affine_error: p must be positive");
    if (resolution < 8) throw std::invalid_argument("best_affine_error: resolution too small");

    const long long n = resolution;
    std::vector<double> xs(static_cast<std::size_t>(n)), ys(xs.size());
    for (long long i = 0; i < n; ++i) {
        xs[static_cast<std::size_t>(i)] = a + (b - a) * (i + 0.5) / static_cast<double>(n);
        ys[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);
    }

    auto objective = [&](double beta, double gamma) {
        double acc = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            acc += std::pow(std::abs(ys[i] - (beta * xs[i] + gamma)), p);
        return std::pow((b - a) * acc / static_cast<double>(n), 1.0 / p);
    };

    // least-squares fit (exact minimizer for p = 2)
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double nn = static_cast<double>(n);
    const double det = nn * sxx - sx * sx;
    double beta = det != 0.0 ? (nn * sxy - sx * sy) / det : 0.0;
    double gamma = (sy - beta * sx) / nn;
    if (p == 2.0) return objective(beta, gamma);

    // Nelder-Mead on (beta, gamma) seeded from the least-squares solution
    struct Vertex {
        double b, g, val;
    };
    double spread = std::max({(b - a), std::abs(beta), std::abs(gamma), 1.0}) * 0.1;
    std::vector<Vertex> simplex = {{beta, gamma, objective(beta, gamma)},
                                   {beta + spread, gamma, objective(beta + spread, gamma)},
                                   {beta, gamma + spread, objective(beta, gamma + spread)}};
    auto by_val = [](const Vertex& u, const Vertex& w) { return u.val < w.val; };
    for (int iter = 0; iter < 500; ++iter) {
        std::sort(simplex.begin(), simplex.end(), by_val);
        if (simplex[2].val - simplex[0].val < 1e-6 * std::max(1.0, simplex[0].val)) break;
        double cb = (simplex[0].b + simplex[1].b) / 2.0;
        double cg = (simplex[0].g + simplex[1].g) / 2.0;
        double rb = cb + (cb - simplex[2].b), rg = cg + (cg - simplex[2].g);
        double rv = objective(rb, rg);
        if (rv < simplex[0].val) {
            double eb = cb + 2.0 * (cb - simplex[2].b), eg = cg + 2.0 * (cg - simplex[2].g);
            double ev = objective(eb, eg);
            simplex[2] = ev < rv ? Vertex{eb, eg, ev} : Vertex{rb, rg, rv};
        } else if (rv < simplex[1].val) {
            simplex[2] = {rb, rg, rv};
        } else {
            double kb = cb + 0.5 * (simplex[2].b - cb), kg = cg + 0.5 * (simplex[2].g - cg);
            double kv = objective(kb, kg);
            if (kv < simplex[2].val) {
                simplex[2] = {kb, kg, kv};
            } else {
                for (int i = 1; i < 3; ++i) {
                    simplex[static_cast<std::size_t>(i)].b =
                        (simplex[static_cast<std::size_t>(i)].b + simplex[0].b) / 2.0;
                    simplex[static_cast<std::size_t>(i)].g =
                        (simplex[static_cast<std::size_t>(i)].g + simplex[0].g) / 2.0;
                    simplex[static_cast<std::size_t>(i)].val =
                        objective(simplex[static_cast<std::size_t>(i)].b,
                                  simplex[static_cast<std::size_t>(i)].g);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(), by_val);
    return simplex[0].val;
}

double rate_fit(const std::vector<std::pair<double, double>>& eps_and_M) {
    if (eps_and_M.size() < 3) throw std::invalid_argument("rate_fit: need at least 3 points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [eps, M] : eps_and_M) {
        if (!(eps > 0.0) || !(M > 0.0)) throw std::invalid_argument("rate_fit: bad data point");
        double x = std::log(1.0 / eps);
        double y = std::log(M);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(eps_and_M.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace relukit
