#pragma once

#include "relukit/network.hpp"

namespace relukit {

// Admissible weight grid [-eps^-s, eps^-s] ∩ 2^{-s*ceil(log2(1/eps))} Z.
struct QuantizationSpec {
    int s = 1;
    double eps = 0.25;

    QuantizationSpec(int s_, double eps_);

    int grid_exponent() const;  // s * ceil(log2(1/eps))
    double grid_step() const;   // 2^{-grid_exponent()}, 0 if it underflows
    double range() const;       // eps^-s, +inf if it overflows
};

// Smallest integer g with 2^-g <= eps; requires eps in (0, 1].
int ceil_log2_inv(double eps);

// True iff x = k * 2^-g exactly for an integer k (exact mantissa test).
bool on_dyadic_grid(double x, int g);

// Rounds x to the nearest grid multiple of 2^-g with ties toward zero; the
// result is exact whenever it is representable.
double round_to_dyadic(double x, int g);

// Nearest admissible grid point to x, ties toward zero, clamped into range.
double quantize_value(double x, const QuantizationSpec& spec);

// True iff every stored weight lies exactly on the clamped grid.
bool is_quantized(const Network& net, const QuantizationSpec& spec);

// Replaces every weight by quantize_value; entries that clamp to exact zero
// are dropped so the sparsity invariant is preserved.
Network quantize_network(const Network& net, const QuantizationSpec& spec);

// s~ = ceil(q*s + s*log2(C)) + s: weights that are (s, eps^q / C)-quantized
// are also (s~, eps)-quantized.
int convert_quantization(int s, double q, double C);

// Smallest s in [1, s_max] for which is_quantized passes; 0 if none does.
int min_quant_s(const Network& net, double eps, int s_max = 64);

}  // namespace relukit
