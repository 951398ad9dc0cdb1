#include "relukit/quantization.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace relukit {

QuantizationSpec::QuantizationSpec(int s_, double eps_) : s(s_), eps(eps_) {
    if (s < 1) throw std::invalid_argument("QuantizationSpec: s must be a positive integer");
    if (!(eps > 0.0) || !(eps < 0.5))
        throw std::invalid_argument("QuantizationSpec: eps must lie in (0, 1/2)");
}

int ceil_log2_inv(double eps) {
    if (!(eps > 0.0) || eps > 1.0) throw std::invalid_argument("ceil_log2_inv: eps out of (0, 1]");
    int g = 0;
    double t = 1.0;
    while (t > eps) {
        t *= 0.5;
        ++g;
        if (g > 1100) throw std::invalid_argument("ceil_log2_inv: eps too small");
    }
    return g;
}

int QuantizationSpec::grid_exponent() const { return s * ceil_log2_inv(eps); }

double QuantizationSpec::grid_step() const { return std::ldexp(1.0, -grid_exponent()); }

double QuantizationSpec::range() const {
    double r = std::pow(eps, -static_cast<double>(s));
    return std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
}

bool on_dyadic_grid(double x, int g) {
    if (x == 0.0) return true;
    if (!std::isfinite(x)) return false;
    int exp2 = 0;
    double m = std::frexp(x, &exp2);  // x = m * 2^exp2, |m| in [0.5, 1)
    // strip trailing zero bits of the 53-bit mantissa
    std::int64_t mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    int e2 = exp2 - 53;
    while ((mant & 1) == 0) {
        mant >>= 1;
        ++e2;
    }
    return e2 >= -g;
}

double round_to_dyadic(double x, int g) {
    if (x == 0.0 || on_dyadic_grid(x, g)) return x;
    // x = mant * 2^e2 with odd integer mant and e2 < -g; shift to grid units.
    int exp2 = 0;
    double m = std::frexp(x, &exp2);
    double mant = std::ldexp(m, 53);
    int e2 = exp2 - 53;
    double in_units = std::ldexp(mant, e2 + g);  // exact: |mant| <= 2^53, e2+g < 0
    double lo = std::floor(in_units);
    double hi = lo + 1.0;
    double pick;
    if (in_units - lo < hi - in_units)
        pick = lo;
    else if (hi - in_units < in_units - lo)
        pick = hi;
    else
        pick = std::abs(lo) < std::abs(hi) ? lo : hi;  // ties toward zero
    return std::ldexp(pick, -g);
}

double quantize_value(double x, const QuantizationSpec& spec) {
    const int g = spec.grid_exponent();
    const double r = spec.range();
    double q = round_to_dyadic(x, g);
    if (std::isfinite(r) && std::abs(q) > r) {
        // largest grid multiple within [-r, r]
        double bound;
        if (on_dyadic_grid(r, g)) {
            bound = r;
        } else {
            double units = std::ldexp(r, g);
            bound = std::isfinite(units) ? std::ldexp(std::floor(units), -g) : r;
        }
        q = q > 0.0 ? bound : -bound;
    }
    return q;
}

bool is_quantized(const Network& net, const QuantizationSpec& spec) {
    const int g = spec.grid_exponent();
    const double r = spec.range();
    auto ok = [&](double v) { return std::abs(v) <= r && on_dyadic_grid(v, g); };
    for (const LayerSpec& layer : net.layers()) {
        for (const MatrixEntry& e : layer.matrix.entries)
            if (!ok(e.value)) return false;
        for (const VectorEntry& e : layer.bias.entries)
            if (!ok(e.value)) return false;
    }
    return true;
}

Network quantize_network(const Network& net, const QuantizationSpec& spec) {
    std::vector<LayerSpec> layers;
    layers.reserve(net.layers().size());
    for (const LayerSpec& layer : net.layers()) {
        LayerSpec out;
        out.matrix = SparseMatrix::zeros(layer.matrix.rows, layer.matrix.cols);
        out.bias = SparseVector::zeros(layer.bias.size);
        for (const MatrixEntry& e : layer.matrix.entries) {
            double q = quantize_value(e.value, spec);
            if (q != 0.0) out.matrix.entries.push_back({e.row, e.col, q});
        }
        for (const VectorEntry& e : layer.bias.entries) {
            double q = quantize_value(e.value, spec);
            if (q != 0.0) out.bias.entries.push_back({e.index, q});
        }
        layers.push_back(std::move(out));
    }
    return Network(net.input_dim(), std::move(layers));
}

int convert_quantization(int s, double q, double C) {
    if (s < 1) throw std::invalid_argument("convert_quantization: s must be positive");
    if (!(q > 0.0)) throw std::invalid_argument("convert_quantization: q must be positive");
    if (!(C >= 1.0)) throw std::invalid_argument("convert_quantization: C must be >= 1");
    return static_cast<int>(std::ceil(q * s + s * std::log2(C))) + s;
}

int min_quant_s(const Network& net, double eps, int s_max) {
    for (int s = 1; s <= s_max; ++s)
        if (is_quantized(net, QuantizationSpec(s, eps))) return s;
    return 0;
}

}  // namespace relukit
