#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relukit/network.hpp"

namespace relukit {

// Fixed-point coding scheme: a K-bit code is 1 sign bit followed by a
// (K-1)-bit magnitude, decoding to sign * magnitude * 2^-grid_exponent.
// Zero-extension of the magnitude embeds every K-bit range into the
// (K+1)-bit range, so the scheme is consistent across code lengths.
struct CodingScheme {
    int grid_exponent = 0;

    bool representable(double value, int K) const;
    std::vector<bool> encode_value(double value, int K) const;
    // decodes K bits; throws on the non-canonical negative-zero code
    double decode_value(const std::vector<bool>& bits, std::size_t offset, int K) const;

    // smallest grid exponent putting every stored weight on the dyadic grid
    static CodingScheme for_network(const Network& net);
};

struct BitCode {
    std::vector<bool> bits;  // most significant bit first, padded with zeros
    std::uint32_t M = 0;
    std::uint32_t K = 0;
    std::uint32_t d = 0;
    std::int32_t grid_exponent = 0;
};

// Length-bound constant of the bit layout: every encoded network fits in
// kCodeLengthConstant * M * (K + ceil(log2 M)) bits. Documented in README.
inline constexpr std::size_t kCodeLengthConstant = 128;

std::size_t code_length_bound(std::uint32_t M, std::uint32_t K);

// Removes neurons whose incoming row and bias are entirely zero, per case
// analysis on the affected layer; the realization is preserved exactly and
// afterwards N <= M + input_dim + 1. Requires scalar output.
Network simplify_network(const Network& net);

// Serializes a simplified network (N <= M + d + 1, at most M weights, every
// weight representable in K bits under the scheme) into the canonical bit
// layout, zero-padded to the declared length bound.
BitCode encode_network(const Network& net, std::uint32_t M, std::uint32_t K,
                       const CodingScheme& scheme);
BitCode encode_network(const Network& net, std::uint32_t M, std::uint32_t K);

// Structural inverse of encode_network; throws std::runtime_error with the
// offending bit offset on any malformed stream.
Network decode_network(const BitCode& code);

// .nnc container: magic "NNC1", little-endian u32 M, K, d, i32 grid
// exponent, u64 payload bit count, payload bytes (MSB-first bit packing).
void write_nnc(const BitCode& code, const std::string& path);
BitCode read_nnc(const std::string& path);

}  // namespace relukit
