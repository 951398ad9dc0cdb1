#include "relukit.h"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "relukit/analysis.hpp"
#include "relukit/codec.hpp"
#include "relukit/json_io.hpp"
#include "relukit/network.hpp"
#include "relukit/quantization.hpp"

using namespace relukit;

struct rk_network {
    Network net;
};

namespace {

thread_local std::string g_last_error = "ok";

rk_status fail(rk_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn>
rk_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& ex) {
        return fail(RK_ERR_INVALID_ARGUMENT, ex.what());
    } catch (const std::exception& ex) {
        return fail(RK_ERR_INTERNAL, ex.what());
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// Measures a network against a target spec: sup over a tensor grid for
// sup-norm targets, L^p (grid for dim <= 3, Monte-Carlo otherwise) else.
double measure_target_error(const TargetSpec& spec, const Network& net, double p,
                            long long resolution, std::uint64_t seed) {
    if (spec.sup_norm) {
        const int d = spec.dim;
        const double hw = spec.domain_half_width;
        long long per_axis = resolution;
        double worst = 0.0;
        std::vector<long long> idx(static_cast<std::size_t>(d), 0);
        std::vector<double> pts;
        std::vector<double> x(static_cast<std::size_t>(d));
        bool done = false;
        while (!done) {
            pts.clear();
            std::vector<double> truth_vals;
            std::size_t n = 0;
            while (n < 2048 && !done) {
                for (int i = 0; i < d; ++i) {
                    double t = per_axis == 1 ? 0.0
                                             : -hw + 2.0 * hw * idx[static_cast<std::size_t>(i)] /
                                                        static_cast<double>(per_axis - 1);
                    x[static_cast<std::size_t>(i)] = t;
                    pts.push_back(t);
                }
                truth_vals.push_back(spec.truth(x));
                ++n;
                int i = 0;
                while (i < d && idx[static_cast<std::size_t>(i)] == per_axis - 1) {
                    idx[static_cast<std::size_t>(i)] = 0;
                    ++i;
                }
                if (i == d)
                    done = true;
                else
                    ++idx[static_cast<std::size_t>(i)];
            }
            std::vector<double> got = net.realize_batch(pts.data(), n);
            for (std::size_t i = 0; i < n; ++i)
                worst = std::max(worst, std::abs(got[i] - truth_vals[i]));
        }
        return worst;
    }
    BatchFn truth = batch_from_pointwise(spec.dim, spec.truth);
    BatchFn approx = batch_from_network(net);
    SampleMethod method = spec.dim <= 3 ? SampleMethod::grid : SampleMethod::monte_carlo;
    long long res = resolution;
    if (method == SampleMethod::grid && spec.dim > 1) {
        // interpret resolution as a total sample budget
        res = std::max<long long>(
            2, static_cast<long long>(std::round(std::pow(static_cast<double>(resolution),
                                                          1.0 / spec.dim))));
    }
    return lp_error(truth, approx, p, spec.dim, method, res, seed).value;
}

}  // namespace

extern "C" {

const char* rk_last_error(void) { return g_last_error.c_str(); }

void rk_network_free(rk_network* net) { delete net; }

void rk_string_free(char* text) { delete[] text; }

rk_status rk_network_from_json(const char* json_text, rk_network** out) {
    return guarded([&]() {
        if (!json_text || !out) return fail(RK_ERR_INVALID_ARGUMENT, "null argument");
        *out = new rk_network{network_from_json(json_text)};
        return RK_OK;
    });
}

rk_status rk_network_to_json(const rk_network* net, char** out_text) {
    return guarded([&]() {
        if (!net || !out_text) return fail(RK_ERR_INVALID_ARGUMENT, "null argument");
        *out_text = dup_string(network_to_json(net->net));
        return RK_OK;
    });
}

rk_status rk_network_load(const char* path, rk_network** out) {
    return guarded([&]() {
        if (!path || !out) return fail(RK_ERR_INVALID_ARGUMENT, "null argument");
        try {
            *out = new rk_network{load_network(path)};
        } catch (const std::runtime_error& ex) {
            return fail(RK_ERR_IO, ex.what());
        }
        return RK_OK;
    });
}

rk_status rk_network_save(const rk_network* net, const char* path) {
    return guarded([&]() {
        if (!net || !path) return fail(RK_ERR_INVALID_ARGUMENT, "null argument");
        try {
            save_network(net->net, path);
        } catch (const std::runtime_error& ex) {
            return fail(RK_ERR_IO, ex.what());
        }
        return RK_OK;
    });
}

size_t rk_network_input_dim(const rk_network* net) {
    return net ? static_cast<size_t>(net->net.input_dim()) : 0;
}

size_t rk_network_output_dim(const rk_network* net) {
    return net ? static_cast<size_t>(net->net.output_dim()) : 0;
}

size_t rk_network_depth(const rk_network* net) {
    return net ? static_cast<size_t>(net->net.depth()) : 0;
}

size_t rk_network_num_weights(const rk_network* net) { return net ? net->net.num_weights() : 0; }

size_t rk_network_num_neurons(const rk_network* net) { return net ? net->net.num_neurons() : 0; }

rk_status rk_network_eval(const rk_network* net, const double* x, size_t dim, double* out,
                          size_t out_dim) {
    return guarded([&]() {
        if (!net || !x || !out) return fail(RK_ERR_INVALID_ARGUMENT, "null argument");
        if (out_dim != static_cast<size_t>(net->net.output_dim()))
            return fail(RK_ERR_INVALID_ARGUMENT, "rk_network_eval: wrong output buffer size");
        std::vector<double> xv(x, x + dim);
        std::vector<double> y = net->net.realize(xv);
        std::memcpy(out, y.data(), y.size() * sizeof(double));
        return RK_OK;
    });
}

rk_status rk_network_validate(const rk_network* net, char** out_text) {
    return guarded([&]() {
        if (!net || !out_text) return fail(RK_ERR_INVALID_ARGUMENT, "null argument");
        std::vector<std::string> violations = net->net.validate();
        if (violations.empty()) {
            *out_text = nullptr;
            return RK_OK;
        }
        std::string joined;
        for (const std::string& v : violations) {
            if (!joined.empty()) joined += "\n";
            joined += v;
        }
        *out_text = dup_string(joined);
        return RK_OK;
    });
}

rk_status rk_build_target(const char* target_json, double eps, double p, rk_network** out,
                          int* quant_s) {
    return guarded([&]() {
        if (!target_json || !out) return fail(RK_ERR_INVALID_ARGUMENT, "null argument");
        TargetSpec spec = parse_target_spec(target_json);
        Network net = spec.build(eps, p);
        if (quant_s) *quant_s = (eps > 0.0 && eps < 0.5) ? min_quant_s(net, eps) : 0;
        *out = new rk_network{std::move(net)};
        return RK_OK;
    });
}

rk_status rk_target_error(const char* target_json, const rk_network* net, double p,
                          long long resolution, uint64_t seed, double* out_error) {
    return guarded([&]() {
        if (!target_json || !net || !out_error)
            return fail(RK_ERR_INVALID_ARGUMENT, "null argument");
        TargetSpec spec = parse_target_spec(target_json);
        *out_error = measure_target_error(spec, net->net, p, resolution, seed);
        return RK_OK;
    });
}

rk_status rk_target_dim(const char* target_json, size_t* out_dim) {
    return guarded([&]() {
        if (!target_json || !out_dim) return fail(RK_ERR_INVALID_ARGUMENT, "null argument");
        *out_dim = static_cast<size_t>(parse_target_spec(target_json).dim);
        return RK_OK;
    });
}

rk_status rk_target_rate(const char* target_json, double p, double* out_rate) {
    return guarded([&]() {
        if (!target_json || !out_rate) return fail(RK_ERR_INVALID_ARGUMENT, "null argument");
        *out_rate = parse_target_spec(target_json).rate(p);
        return RK_OK;
    });
}

rk_status rk_simplify(const rk_network* net, rk_network** out) {
    return guarded([&]() {
        if (!net || !out) return fail(RK_ERR_INVALID_ARGUMENT, "null argument");
        *out = new rk_network{simplify_network(net->net)};
        return RK_OK;
    });
}

rk_status rk_encode_file(const rk_network* net, const char* path, uint32_t M, uint32_t K,
                         uint64_t* out_bits) {
    return guarded([&]() {
        if (!net || !path) return fail(RK_ERR_INVALID_ARGUMENT, "null argument");
        Network simplified = simplify_network(net->net);
        BitCode code = encode_network(simplified, M, K);
        try {
            write_nnc(code, path);
        } catch (const std::runtime_error& ex) {
            return fail(RK_ERR_IO, ex.what());
        }
        if (out_bits) *out_bits = code.bits.size();
        return RK_OK;
    });
}

rk_status rk_decode_file(const char* path, rk_network** out) {
    return guarded([&]() {
        if (!path || !out) return fail(RK_ERR_INVALID_ARGUMENT, "null argument");
        BitCode code;
        try {
            code = read_nnc(path);
        } catch (const std::runtime_error& ex) {
            return fail(RK_ERR_IO, ex.what());
        }
        try {
            *out = new rk_network{decode_network(code)};
        } catch (const std::runtime_error& ex) {
            return fail(RK_ERR_DECODE, ex.what());
        }
        return RK_OK;
    });
}

rk_status rk_count_slice_pieces(const rk_network* net, const double* x0, const double* v,
                                double t_lo, double t_hi, long long resolution, double tol,
                                long long* out) {
    return guarded([&]() {
        if (!net || !x0 || !v || !out) return fail(RK_ERR_INVALID_ARGUMENT, "null argument");
        std::size_t d = static_cast<std::size_t>(net->net.input_dim());
        std::vector<double> x0v(x0, x0 + d), vv(v, v + d);
        *out = count_slice_pieces(net->net, x0v, vv, t_lo, t_hi, resolution, tol);
        return RK_OK;
    });
}

rk_status rk_piece_bound(const rk_network* net, double* out) {
    return guarded([&]() {
        if (!net || !out) return fail(RK_ERR_INVALID_ARGUMENT, "null argument");
        *out = piece_bound(net->net);
        return RK_OK;
    });
}

rk_status rk_rate_fit(const double* eps, const double* M, size_t n, double* out_slope) {
    return guarded([&]() {
        if (!eps || !M || !out_slope) return fail(RK_ERR_INVALID_ARGUMENT, "null argument");
        std::vector<std::pair<double, double>> pts;
        for (size_t i = 0; i < n; ++i) pts.emplace_back(eps[i], M[i]);
        *out_slope = rate_fit(pts);
        return RK_OK;
    });
}

}  // extern "C"
