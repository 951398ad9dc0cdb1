#include "relukit/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "relukit/approximators.hpp"
#include "relukit/constructors.hpp"
#include "relukit/targets.hpp"

namespace relukit {

using nlohmann::json;

std::string network_to_json(const Network& net) {
    json j;
    j["input_dim"] = net.input_dim();
    j["layers"] = json::array();
    for (const LayerSpec& layer : net.layers()) {
        json jl;
        jl["rows"] = layer.matrix.rows;
        jl["cols"] = layer.matrix.cols;
        jl["entries"] = json::array();
        for (const MatrixEntry& e : layer.matrix.entries)
            jl["entries"].push_back(json::array({e.row, e.col, e.value}));
        jl["bias"] = json::array();
        for (const VectorEntry& e : layer.bias.entries)
            jl["bias"].push_back(json::array({e.index, e.value}));
        j["layers"].push_back(std::move(jl));
    }
    return j.dump();
}

Network network_from_json(const std::string& text) {
    json j = json::parse(text);
    if (!j.contains("input_dim") || !j.contains("layers"))
        throw std::invalid_argument("network json: missing input_dim or layers");
    int input_dim = j["input_dim"].get<int>();
    std::vector<LayerSpec> layers;
    for (const json& jl : j["layers"]) {
        LayerSpec layer;
        layer.matrix = SparseMatrix::zeros(jl["rows"].get<int>(), jl["cols"].get<int>());
        for (const json& je : jl["entries"])
            layer.matrix.entries.push_back(
                {je[0].get<int>(), je[1].get<int>(), je[2].get<double>()});
        layer.bias = SparseVector::zeros(jl["rows"].get<int>());
        for (const json& je : jl["bias"])
            layer.bias.entries.push_back({je[0].get<int>(), je[1].get<double>()});
        layers.push_back(std::move(layer));
    }
    return Network(input_dim, std::move(layers));
}

void save_network(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_network: cannot open " + path);
    out << network_to_json(net) << "\n";
    if (!out) throw std::runtime_error("save_network: write failed for " + path);
}

Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_network: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return network_from_json(ss.str());
}

namespace {

SmoothTarget smooth_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    const int dim = j.at("dim").get<int>();
    const double beta = j.at("beta").get<double>();
    const double bound = j.at("bound").get<double>();
    if (family == "constant")
        return make_constant_target(dim, beta, bound, j.at("value").get<double>());
    if (family == "sine")
        return make_sine_target(dim, beta, bound, j.at("amplitude").get<double>(),
                                j.at("omega").get<double>(), j.value("phase", 0.0));
    if (family == "polynomial") {
        std::vector<std::pair<Multiindex, double>> terms;
        for (const json& jt : j.at("terms")) {
            Multiindex a = jt.at("alpha").get<std::vector<int>>();
            terms.emplace_back(std::move(a), jt.at("c").get<double>());
        }
        return make_polynomial_target(dim, beta, bound, terms);
    }
    throw std::invalid_argument("target json: unknown smooth family '" + family + "'");
}

HorizonTarget horizon_from_json(const json& j) {
    HorizonTarget h;
    const int dim = j.at("dim").get<int>();
    json jg = j.at("gamma");
    jg["dim"] = dim - 1;
    if (!jg.contains("beta")) jg["beta"] = j.value("beta", 2.0);
    if (!jg.contains("bound")) jg["bound"] = j.value("bound", 1.0);
    h.gamma = smooth_from_json(jg);
    if (j.contains("permutation"))
        h.permutation = j.at("permutation").get<std::vector<int>>();
    else
        h.permutation = identity_permutation(dim);
    return h;
}

PiecewiseTarget indicator_from_json(const json& j) {
    const int dim = j.at("dim").get<int>();
    const int r = j.value("r", 1);
    const std::string set = j.at("set").get<std::string>();
    if (set == "half_cube") return make_half_space_indicator(dim, r, j.value("axis", 0));
    if (set == "full_cube") return make_full_cube_indicator(dim, r);
    if (set == "empty") return make_empty_indicator(dim, r);
    if (set == "horizon") {
        json jh = j.at("horizon");
        jh["dim"] = dim;
        return make_uniform_piecewise(dim, r, horizon_from_json(jh));
    }
    throw std::invalid_argument("target json: unknown indicator set '" + set + "'");
}

double nan_rate(double) { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

TargetSpec parse_target_spec(const std::string& json_text) {
    json j = json::parse(json_text);
    const std::string kind = j.at("kind").get<std::string>();
    TargetSpec spec;
    spec.name = j.value("name", kind);
    spec.rate = nan_rate;

    if (kind == "smooth") {
        SmoothTarget t = smooth_from_json(j);
        spec.dim = t.dim;
        spec.build = [t](double eps, double p) { return approximate_smooth(t, eps, p); };
        spec.truth = t.eval;
        const double beta = t.beta;
        const int d = t.dim;
        spec.rate = [beta, d](double) { return d / beta; };
    } else if (kind == "horizon") {
        HorizonTarget t = horizon_from_json(j);
        spec.dim = t.dim();
        spec.build = [t](double eps, double p) { return approximate_horizon(t, eps, p); };
        spec.truth = [t](const std::vector<double>& x) { return t.eval(x); };
        const double beta = t.gamma.beta;
        const int d = t.dim();
        spec.rate = [beta, d](double p) { return p * (d - 1) / beta; };
    } else if (kind == "indicator") {
        PiecewiseTarget t = indicator_from_json(j);
        spec.dim = t.dim;
        spec.build = [t](double eps, double p) { return approximate_indicator(t, eps, p); };
        spec.truth = [t](const std::vector<double>& x) { return t.eval_indicator(x); };
        const double beta = t.boundary_beta();
        const int d = t.dim;
        spec.rate = [beta, d](double p) { return p * (d - 1) / beta; };
    } else if (kind == "piecewise") {
        PiecewiseTarget t = indicator_from_json(j.at("indicator"));
        t.smooth_factor = smooth_from_json(j.at("factor"));
        spec.dim = t.dim;
        spec.build = [t](double eps, double p) {
            return approximate_piecewise_smooth(t, eps, p);
        };
        spec.truth = [t](const std::vector<double>& x) { return t.eval(x); };
        const double beta = t.boundary_beta();
        const int d = t.dim;
        spec.rate = [beta, d](double p) { return p * (d - 1) / beta; };
    } else if (kind == "composite") {
        CompositeTarget t;
        json jo = j.at("outer");
        PiecewiseTarget outer = indicator_from_json(jo.at("indicator"));
        if (jo.contains("factor")) outer.smooth_factor = smooth_from_json(jo.at("factor"));
        t.outer = std::move(outer);
        const int D = j.at("input_dim").get<int>();
        const std::string feature = j.value("feature_map", "projection");
        if (feature != "projection")
            throw std::invalid_argument("target json: unknown feature map '" + feature + "'");
        for (int i = 0; i < t.outer.dim; ++i)
            t.feature_map.push_back(make_projection_target(D, i));
        t.kappa = j.value("kappa", 1.0);
        spec.dim = D;
        spec.build = [t](double eps, double p) { return approximate_composite(t, eps, p); };
        spec.truth = [t](const std::vector<double>& x) { return t.eval(x); };
        const double beta = t.outer.boundary_beta();
        const int d = t.outer.dim;
        spec.rate = [beta, d](double p) { return p * (d - 1) / beta; };
    } else if (kind == "multiplication") {
        const double m_bound = j.at("m_bound").get<double>();
        const int L = j.value("depth_param", 1);
        spec.dim = 2;
        spec.domain_half_width = m_bound;
        spec.sup_norm = true;
        spec.build = [m_bound, L](double eps, double) {
            return multiplication_network(m_bound, eps, L);
        };
        spec.truth = [](const std::vector<double>& x) { return x[0] * x[1]; };
        const int LL = L;
        spec.rate = [LL](double) { return 1.0 / (2.0 * LL); };
    } else if (kind == "heaviside") {
        const int dim = j.at("dim").get<int>();
        spec.dim = dim;
        spec.build = [dim](double eps, double) { return heaviside_network(dim, eps); };
        spec.truth = [](const std::vector<double>& x) { return x[0] >= 0.0 ? 1.0 : 0.0; };
    } else if (kind == "sawtooth") {
        const int t = j.at("t").get<int>();
        spec.dim = 1;
        spec.sup_norm = true;
        spec.build = [t](double, double) { return sawtooth_network(t); };
        spec.truth = [t](const std::vector<double>& x) {
            double v = x[0] + 0.5;  // ground truth lives on [0, 1]
            for (int i = 0; i < t; ++i) v = v < 0.5 ? 2.0 * v : 2.0 * (1.0 - v);
            return v;
        };
    } else if (kind == "square") {
        const int m = j.at("m").get<int>();
        const int L = j.value("depth_param", 1);
        spec.dim = 1;
        spec.sup_norm = true;
        spec.build = [m, L](double, double) { return square_network(m, L); };
        spec.truth = [m](const std::vector<double>& x) {
            double v = x[0] + 0.5;  // ground truth lives on [0, 1]
            double acc = v;
            double g = v;
            for (int t = 1; t <= m; ++t) {
                g = g < 0.5 ? 2.0 * g : 2.0 * (1.0 - g);
                acc -= std::ldexp(g, -2 * t);
            }
            return acc;
        };
    } else if (kind == "monomial") {
        Multiindex alpha = j.at("alpha").get<std::vector<int>>();
        const int ell = j.value("ell", std::max(1, mi_order(alpha)));
        spec.dim = static_cast<int>(alpha.size());
        spec.build = [alpha, ell](double eps, double) {
            return monomial_network(alpha, eps, ell);
        };
        spec.truth = [alpha](const std::vector<double>& x) { return mi_pow(x, alpha); };
        const int d = static_cast<int>(alpha.size());
        spec.rate = [d, ell](double) { return static_cast<double>(d) / ell; };
    } else {
        throw std::invalid_argument("target json: unknown kind '" + kind + "'");
    }
    return spec;
}

TargetSpec load_target_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_target_spec: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_target_spec(ss.str());
}

}  // namespace relukit
