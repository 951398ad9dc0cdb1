#include "relukit/codec.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "relukit/quantization.hpp"

namespace relukit {

namespace {

int ceil_log2(std::uint64_t n) {
    int b = 0;
    while ((1ull << b) < n) ++b;
    return b;
}

struct BitWriter {
    std::vector<bool> bits;

    void put(std::uint64_t value, int width) {
        for (int i = width - 1; i >= 0; --i) bits.push_back((value >> i) & 1u);
    }
    void put_bits(const std::vector<bool>& b) { bits.insert(bits.end(), b.begin(), b.end()); }
};

struct BitReader {
    const std::vector<bool>& bits;
    std::size_t pos = 0;

    explicit BitReader(const std::vector<bool>& b) : bits(b) {}

    std::uint64_t get(int width, const char* what) {
        if (pos + static_cast<std::size_t>(width) > bits.size())
            throw std::runtime_error("decode error at bit " + std::to_string(pos) +
                                     ": truncated " + what);
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v = (v << 1) | (bits[pos++] ? 1u : 0u);
        return v;
    }
};

[[noreturn]] void decode_fail(std::size_t pos, const std::string& msg) {
    throw std::runtime_error("decode error at bit " + std::to_string(pos) + ": " + msg);
}

}  // namespace

bool CodingScheme::representable(double value, int K) const {
    if (value == 0.0 || !std::isfinite(value)) return false;
    if (K < 2) return false;
    if (!on_dyadic_grid(value, grid_exponent)) return false;
    double units = std::abs(std::ldexp(value, grid_exponent));
    double max_mag = std::ldexp(1.0, K - 1) - 1.0;
    return units <= max_mag;
}

std::vector<bool> CodingScheme::encode_value(double value, int K) const {
    if (!representable(value, K))
        throw std::invalid_argument("CodingScheme: weight not representable in " +
                                    std::to_string(K) + " bits");
    std::uint64_t mag = static_cast<std::uint64_t>(std::abs(std::ldexp(value, grid_exponent)));
    std::vector<bool> out;
    out.push_back(value < 0.0);
    for (int i = K - 2; i >= 0; --i) out.push_back((mag >> i) & 1u);
    return out;
}

double CodingScheme::decode_value(const std::vector<bool>& bits, std::size_t offset, int K) const {
    if (offset + static_cast<std::size_t>(K) > bits.size())
        decode_fail(offset, "truncated value code");
    bool negative = bits[offset];
    std::uint64_t mag = 0;
    for (int i = 1; i < K; ++i) mag = (mag << 1) | (bits[offset + static_cast<std::size_t>(i)] ? 1u : 0u);
    if (mag == 0) decode_fail(offset, "zero magnitude in value code");
    double v = std::ldexp(static_cast<double>(mag), -grid_exponent);
    return negative ? -v : v;
}

CodingScheme CodingScheme::for_network(const Network& net) {
    int g = 0;
    auto update = [&g](double v) {
        for (int cand = g; cand <= 1100; ++cand) {
            if (on_dyadic_grid(v, cand)) {
                g = std::max(g, cand);
                return;
            }
        }
        throw std::invalid_argument("CodingScheme::for_network: weight not dyadic");
    };
    for (const LayerSpec& layer : net.layers()) {
        for (const MatrixEntry& e : layer.matrix.entries) update(e.value);
        for (const VectorEntry& e : layer.bias.entries) update(e.value);
    }
    return CodingScheme{g};
}

std::size_t code_length_bound(std::uint32_t M, std::uint32_t K) {
    return kCodeLengthConstant * static_cast<std::size_t>(M) *
           (static_cast<std::size_t>(K) + static_cast<std::size_t>(ceil_log2(M)));
}

Network simplify_network(const Network& net) {
    if (net.output_dim() != 1)
        throw std::invalid_argument("simplify_network: output dimension must be 1");
    const int d = net.input_dim();
    std::vector<LayerSpec> layers = net.layers();

    auto num_weights = [&]() {
        std::size_t m = 0;
        for (const LayerSpec& l : layers) m += l.matrix.nnz() + l.bias.nnz();
        return m;
    };
    auto num_neurons = [&]() {
        std::size_t n = static_cast<std::size_t>(d);
        for (const LayerSpec& l : layers) n += static_cast<std::size_t>(l.matrix.rows);
        return n;
    };

    while (num_neurons() > num_weights() + static_cast<std::size_t>(d) + 1) {
        // maximal layer with a row whose matrix part and bias are both zero
        int zl = -1;
        int zi = -1;
        for (int l = static_cast<int>(layers.size()) - 1; l >= 0 && zl < 0; --l) {
            std::vector<bool> has(static_cast<std::size_t>(layers[static_cast<std::size_t>(l)].matrix.rows), false);
            for (const MatrixEntry& e : layers[static_cast<std::size_t>(l)].matrix.entries)
                has[static_cast<std::size_t>(e.row)] = true;
            for (const VectorEntry& e : layers[static_cast<std::size_t>(l)].bias.entries)
                has[static_cast<std::size_t>(e.index)] = true;
            for (std::size_t i = 0; i < has.size(); ++i)
                if (!has[i]) {
                    zl = l;
                    zi = static_cast<int>(i);
                    break;
                }
        }
        if (zl < 0) break;  // no dead row; counting argument says this cannot happen

        LayerSpec& layer = layers[static_cast<std::size_t>(zl)];
        if (layer.matrix.rows > 1) {
            // case 1: drop the dead row and the matching column of the next layer
            SparseMatrix nm = SparseMatrix::zeros(layer.matrix.rows - 1, layer.matrix.cols);
            for (const MatrixEntry& e : layer.matrix.entries)
                nm.entries.push_back({e.row > zi ? e.row - 1 : e.row, e.col, e.value});
            SparseVector nb = SparseVector::zeros(layer.bias.size - 1);
            for (const VectorEntry& e : layer.bias.entries)
                nb.entries.push_back({e.index > zi ? e.index - 1 : e.index, e.value});
            layer.matrix = std::move(nm);
            layer.bias = std::move(nb);
            LayerSpec& next = layers[static_cast<std::size_t>(zl) + 1];
            SparseMatrix nn = SparseMatrix::zeros(next.matrix.rows, next.matrix.cols - 1);
            for (const MatrixEntry& e : next.matrix.entries) {
                if (e.col == zi) continue;  // multiplies a neuron that is always 0
                nn.entries.push_back({e.row, e.col > zi ? e.col - 1 : e.col, e.value});
            }
            next.matrix = std::move(nn);
        } else if (zl > 0) {
            // case 2: a 1-wide all-zero layer feeds zero forward
            if (zl == static_cast<int>(layers.size()) - 1) {
                layers.clear();
                layers.push_back({SparseMatrix::zeros(1, d), SparseVector::zeros(1)});
            } else {
                std::vector<LayerSpec> kept;
                kept.push_back({SparseMatrix::zeros(1, d), SparseVector::zeros(1)});
                for (std::size_t l = static_cast<std::size_t>(zl) + 1; l < layers.size(); ++l)
                    kept.push_back(std::move(layers[l]));
                layers = std::move(kept);
            }
        } else {
            // case 3: first layer 1-wide and zero; maximality rules this out
            // unless the whole network is already the zero network
            break;
        }
    }
    return Network(d, std::move(layers));
}

BitCode encode_network(const Network& net, std::uint32_t M, std::uint32_t K) {
    return encode_network(net, M, K, CodingScheme::for_network(net));
}

BitCode encode_network(const Network& net, std::uint32_t M, std::uint32_t K,
                       const CodingScheme& scheme) {
    if (net.output_dim() != 1)
        throw std::invalid_argument("encode_network: output dimension must be 1");
    if (M < 1 || K < 2) throw std::invalid_argument("encode_network: need M >= 1 and K >= 2");
    if (net.num_weights() > M)
        throw std::invalid_argument("encode_network: network has more than M weights");
    if (net.num_neurons() > net.num_weights() + static_cast<std::size_t>(net.input_dim()) + 1)
        throw std::invalid_argument("encode_network: network is not simplified (N > M + d + 1)");
    const std::uint32_t L = static_cast<std::uint32_t>(net.depth());
    if (L > M + 1) throw std::invalid_argument("encode_network: depth exceeds M + 1");
    if (net.depth() > 1)
        for (const LayerSpec& layer : net.layers())
            if (layer.matrix.nnz() + layer.bias.nnz() == 0)
                throw std::invalid_argument("encode_network: empty layer in multi-layer network");

    const std::uint64_t T = 3ull * static_cast<std::uint64_t>(net.input_dim()) * M;
    const int idx_bits = ceil_log2(T);
    const int cnt_bits = ceil_log2(T * T + 1);
    const int bias_cnt_bits = ceil_log2(T + 1);
    const int header_bits = ceil_log2(static_cast<std::uint64_t>(M) + 1);

    BitWriter w;
    w.put(L - 1, header_bits);
    for (const LayerSpec& layer : net.layers()) {
        w.put(static_cast<std::uint64_t>(layer.matrix.rows) - 1, idx_bits);
        w.put(static_cast<std::uint64_t>(layer.matrix.cols) - 1, idx_bits);
        w.put(layer.matrix.nnz(), cnt_bits);
        for (const MatrixEntry& e : layer.matrix.entries) {
            w.put(static_cast<std::uint64_t>(e.row), idx_bits);
            w.put(static_cast<std::uint64_t>(e.col), idx_bits);
            w.put_bits(scheme.encode_value(e.value, static_cast<int>(K)));
        }
        w.put(static_cast<std::uint64_t>(layer.bias.size) - 1, idx_bits);
        w.put(layer.bias.nnz(), bias_cnt_bits);
        for (const VectorEntry& e : layer.bias.entries) {
            w.put(static_cast<std::uint64_t>(e.index), idx_bits);
            w.put_bits(scheme.encode_value(e.value, static_cast<int>(K)));
        }
    }

    const std::size_t bound = code_length_bound(M, K);
    if (w.bits.size() > bound)
        throw std::invalid_argument("encode_network: content exceeds the declared length bound");
    w.bits.resize(bound, false);

    BitCode code;
    code.bits = std::move(w.bits);
    code.M = M;
    code.K = K;
    code.d = static_cast<std::uint32_t>(net.input_dim());
    code.grid_exponent = scheme.grid_exponent;
    return code;
}

Network decode_network(const BitCode& code) {
    if (code.M < 1 || code.K < 2 || code.d < 1)
        throw std::runtime_error("decode error at bit 0: bad parameters");
    if (code.bits.size() != code_length_bound(code.M, code.K))
        throw std::runtime_error("decode error at bit 0: wrong code length");
    const CodingScheme scheme{code.grid_exponent};
    const std::uint64_t T = 3ull * code.d * code.M;
    const int idx_bits = ceil_log2(T);
    const int cnt_bits = ceil_log2(T * T + 1);
    const int bias_cnt_bits = ceil_log2(T + 1);
    const int header_bits = ceil_log2(static_cast<std::uint64_t>(code.M) + 1);

    BitReader r(code.bits);
    const std::uint64_t L = r.get(header_bits, "layer count") + 1;
    if (L > static_cast<std::uint64_t>(code.M) + 1)
        decode_fail(0, "layer count exceeds M + 1");

    std::vector<LayerSpec> layers;
    std::uint64_t prev = code.d;
    std::size_t total_weights = 0;
    for (std::uint64_t l = 0; l < L; ++l) {
        const std::size_t layer_pos = r.pos;
        std::uint64_t rows = r.get(idx_bits, "row count") + 1;
        std::uint64_t cols = r.get(idx_bits, "column count") + 1;
        if (rows > T || cols > T) decode_fail(layer_pos, "layer shape exceeds T");
        if (cols != prev) decode_fail(layer_pos, "layer input width does not chain");
        std::uint64_t nnz = r.get(cnt_bits, "nonzero count");
        if (nnz > rows * cols) decode_fail(layer_pos, "nonzero count exceeds layer size");
        SparseMatrix mat = SparseMatrix::zeros(static_cast<int>(rows), static_cast<int>(cols));
        std::int64_t last = -1;
        for (std::uint64_t e = 0; e < nnz; ++e) {
            const std::size_t entry_pos = r.pos;
            std::uint64_t row = r.get(idx_bits, "entry row");
            std::uint64_t col = r.get(idx_bits, "entry column");
            if (row >= rows || col >= cols) decode_fail(entry_pos, "entry index out of range");
            std::int64_t key = static_cast<std::int64_t>(row * cols + col);
            if (key <= last) decode_fail(entry_pos, "entries not in canonical order");
            last = key;
            double v = scheme.decode_value(code.bits, r.pos, static_cast<int>(code.K));
            r.pos += code.K;
            mat.entries.push_back({static_cast<int>(row), static_cast<int>(col), v});
        }
        const std::size_t bias_pos = r.pos;
        std::uint64_t blen = r.get(idx_bits, "bias length") + 1;
        if (blen != rows) decode_fail(bias_pos, "bias length does not match row count");
        std::uint64_t bnnz = r.get(bias_cnt_bits, "bias nonzero count");
        if (bnnz > blen) decode_fail(bias_pos, "bias nonzero count exceeds length");
        SparseVector bias = SparseVector::zeros(static_cast<int>(blen));
        std::int64_t blast = -1;
        for (std::uint64_t e = 0; e < bnnz; ++e) {
            const std::size_t entry_pos = r.pos;
            std::uint64_t idx = r.get(idx_bits, "bias index");
            if (idx >= blen) decode_fail(entry_pos, "bias index out of range");
            if (static_cast<std::int64_t>(idx) <= blast)
                decode_fail(entry_pos, "bias entries not in canonical order");
            blast = static_cast<std::int64_t>(idx);
            double v = scheme.decode_value(code.bits, r.pos, static_cast<int>(code.K));
            r.pos += code.K;
            bias.entries.push_back({static_cast<int>(idx), v});
        }
        total_weights += static_cast<std::size_t>(nnz + bnnz);
        if (L > 1 && nnz + bnnz == 0) decode_fail(layer_pos, "empty layer in multi-layer network");
        layers.push_back({std::move(mat), std::move(bias)});
        prev = rows;
    }
    if (prev != 1) decode_fail(r.pos, "output dimension is not 1");
    if (total_weights > code.M) decode_fail(r.pos, "total weights exceed M");
    for (std::size_t i = r.pos; i < code.bits.size(); ++i)
        if (code.bits[i]) decode_fail(i, "nonzero padding");
    try {
        return Network(static_cast<int>(code.d), std::move(layers));
    } catch (const std::invalid_argument& ex) {
        decode_fail(r.pos, std::string("structural check failed: ") + ex.what());
    }
}

void write_nnc(const BitCode& code, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_nnc: cannot open " + path);
    auto put_u32 = [&out](std::uint32_t v) {
        unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
        out.write(reinterpret_cast<const char*>(b), 4);
    };
    out.write("NNC1", 4);
    put_u32(code.M);
    put_u32(code.K);
    put_u32(code.d);
    put_u32(static_cast<std::uint32_t>(code.grid_exponent));
    std::uint64_t nbits = code.bits.size();
    unsigned char nb[8];
    for (int i = 0; i < 8; ++i) nb[i] = static_cast<unsigned char>(nbits >> (8 * i));
    out.write(reinterpret_cast<const char*>(nb), 8);
    std::vector<unsigned char> bytes((code.bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < code.bits.size(); ++i)
        if (code.bits[i]) bytes[i / 8] |= static_cast<unsigned char>(1u << (7 - i % 8));
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write_nnc: write failed for " + path);
}

BitCode read_nnc(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_nnc: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "NNC1", 4) != 0)
        throw std::runtime_error("read_nnc: bad magic bytes");
    auto get_u32 = [&in]() {
        unsigned char b[4];
        in.read(reinterpret_cast<char*>(b), 4);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    };
    BitCode code;
    code.M = get_u32();
    code.K = get_u32();
    code.d = get_u32();
    code.grid_exponent = static_cast<std::int32_t>(get_u32());
    unsigned char nb[8];
    in.read(reinterpret_cast<char*>(nb), 8);
    if (!in) throw std::runtime_error("read_nnc: truncated header");
    std::uint64_t nbits = 0;
    for (int i = 0; i < 8; ++i) nbits |= static_cast<std::uint64_t>(nb[i]) << (8 * i);
    if (nbits > (1ull << 36)) throw std::runtime_error("read_nnc: implausible bit count");
    std::vector<unsigned char> bytes((nbits + 7) / 8);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!in) throw std::runtime_error("read_nnc: truncated payload");
    code.bits.resize(nbits);
    for (std::uint64_t i = 0; i < nbits; ++i)
        code.bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
    return code;
}

}  // namespace relukit
