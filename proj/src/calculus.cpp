#include "relukit/calculus.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace relukit {

namespace {

// first_mat * second_mat as sparse matrices; exact-zero products are dropped.
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("multiply: inner dimension mismatch");
    std::map<std::pair<int, int>, double> acc;
    std::vector<std::vector<const MatrixEntry*>> b_by_row(static_cast<std::size_t>(b.rows));
    for (const MatrixEntry& e : b.entries) b_by_row[static_cast<std::size_t>(e.row)].push_back(&e);
    for (const MatrixEntry& ea : a.entries)
        for (const MatrixEntry* eb : b_by_row[static_cast<std::size_t>(ea.col)])
            acc[{ea.row, eb->col}] += ea.value * eb->value;
    SparseMatrix out = SparseMatrix::zeros(a.rows, b.cols);
    for (const auto& [pos, v] : acc)
        if (v != 0.0) out.entries.push_back({pos.first, pos.second, v});
    return out;
}

// a * x + y where x, y are sparse vectors.
SparseVector affine_apply(const SparseMatrix& a, const SparseVector& x, const SparseVector& y) {
    if (a.cols != x.size || a.rows != y.size)
        throw std::invalid_argument("affine_apply: dimension mismatch");
    std::map<int, double> acc;
    for (const VectorEntry& e : y.entries) acc[e.index] = e.value;
    std::vector<double> dense_x(static_cast<std::size_t>(x.size), 0.0);
    for (const VectorEntry& e : x.entries) dense_x[static_cast<std::size_t>(e.index)] = e.value;
    for (const MatrixEntry& e : a.entries) {
        double v = e.value * dense_x[static_cast<std::size_t>(e.col)];
        if (v != 0.0) acc[e.row] += v;
    }
    SparseVector out = SparseVector::zeros(a.rows);
    for (const auto& [idx, v] : acc)
        if (v != 0.0) out.entries.push_back({idx, v});
    return out;
}

// [a | sign*a] horizontally.
SparseMatrix hstack_signed(const SparseMatrix& a, double sign) {
    SparseMatrix out = SparseMatrix::zeros(a.rows, 2 * a.cols);
    for (const MatrixEntry& e : a.entries) out.entries.push_back({e.row, e.col, e.value});
    for (const MatrixEntry& e : a.entries)
        out.entries.push_back({e.row, e.col + a.cols, sign * e.value});
    out.normalize();
    return out;
}

// [a; sign*a] vertically.
SparseMatrix vstack_signed(const SparseMatrix& a, double sign) {
    SparseMatrix out = SparseMatrix::zeros(2 * a.rows, a.cols);
    for (const MatrixEntry& e : a.entries) out.entries.push_back({e.row, e.col, e.value});
    for (const MatrixEntry& e : a.entries)
        out.entries.push_back({e.row + a.rows, e.col, sign * e.value});
    out.normalize();
    return out;
}

SparseVector vstack_signed(const SparseVector& a, double sign) {
    SparseVector out = SparseVector::zeros(2 * a.size);
    for (const VectorEntry& e : a.entries) out.entries.push_back({e.index, e.value});
    for (const VectorEntry& e : a.entries) out.entries.push_back({e.index + a.size, sign * e.value});
    out.normalize();
    return out;
}

SparseMatrix block_diag(const SparseMatrix& a, const SparseMatrix& b) {
    SparseMatrix out = SparseMatrix::zeros(a.rows + b.rows, a.cols + b.cols);
    for (const MatrixEntry& e : a.entries) out.entries.push_back({e.row, e.col, e.value});
    for (const MatrixEntry& e : b.entries)
        out.entries.push_back({e.row + a.rows, e.col + a.cols, e.value});
    out.normalize();
    return out;
}

SparseMatrix vstack(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols != b.cols) throw std::invalid_argument("vstack: column mismatch");
    SparseMatrix out = SparseMatrix::zeros(a.rows + b.rows, a.cols);
    for (const MatrixEntry& e : a.entries) out.entries.push_back({e.row, e.col, e.value});
    for (const MatrixEntry& e : b.entries) out.entries.push_back({e.row + a.rows, e.col, e.value});
    out.normalize();
    return out;
}

SparseVector concat_vec(const SparseVector& a, const SparseVector& b) {
    SparseVector out = SparseVector::zeros(a.size + b.size);
    for (const VectorEntry& e : a.entries) out.entries.push_back({e.index, e.value});
    for (const VectorEntry& e : b.entries) out.entries.push_back({e.index + a.size, e.value});
    return out;
}

}  // namespace

Network concatenate(const Network& first, const Network& second) {
    if (second.output_dim() != first.input_dim())
        throw std::invalid_argument("concatenate: output dim of second (" +
                                    std::to_string(second.output_dim()) +
                                    ") must equal input dim of first (" +
                                    std::to_string(first.input_dim()) + ")");
    std::vector<LayerSpec> layers;
    const auto& ls2 = second.layers();
    const auto& ls1 = first.layers();
    for (std::size_t l = 0; l + 1 < ls2.size(); ++l) layers.push_back(ls2[l]);
    LayerSpec merged;
    merged.matrix = multiply(ls1.front().matrix, ls2.back().matrix);
    merged.bias = affine_apply(ls1.front().matrix, ls2.back().bias, ls1.front().bias);
    layers.push_back(std::move(merged));
    for (std::size_t l = 1; l < ls1.size(); ++l) layers.push_back(ls1[l]);
    return Network(second.input_dim(), std::move(layers));
}

Network identity_network(int d, int L) {
    if (d < 1 || L < 1) throw std::invalid_argument("identity_network: d and L must be positive");
    std::vector<LayerSpec> layers;
    if (L == 1) {
        layers.push_back({SparseMatrix::identity(d), SparseVector::zeros(d)});
        return Network(d, std::move(layers));
    }
    layers.push_back({vstack_signed(SparseMatrix::identity(d), -1.0), SparseVector::zeros(2 * d)});
    for (int l = 0; l < L - 2; ++l)
        layers.push_back({SparseMatrix::identity(2 * d), SparseVector::zeros(2 * d)});
    layers.push_back({hstack_signed(SparseMatrix::identity(d), -1.0), SparseVector::zeros(d)});
    return Network(d, std::move(layers));
}

Network sparse_concatenate(const Network& first, const Network& second) {
    if (second.output_dim() != first.input_dim())
        throw std::invalid_argument("sparse_concatenate: dimension mismatch");
    std::vector<LayerSpec> layers;
    const auto& ls2 = second.layers();
    const auto& ls1 = first.layers();
    for (std::size_t l = 0; l + 1 < ls2.size(); ++l) layers.push_back(ls2[l]);
    layers.push_back(
        {vstack_signed(ls2.back().matrix, -1.0), vstack_signed(ls2.back().bias, -1.0)});
    layers.push_back({hstack_signed(ls1.front().matrix, -1.0), ls1.front().bias});
    for (std::size_t l = 1; l < ls1.size(); ++l) layers.push_back(ls1[l]);
    return Network(second.input_dim(), std::move(layers));
}

Network parallelize(const Network& first, const Network& second) {
    if (first.input_dim() != second.input_dim())
        throw std::invalid_argument("parallelize: input dimensions differ");
    if (first.depth() < second.depth())
        return parallelize(pad_depth(first, second.depth()), second);
    if (second.depth() < first.depth())
        return parallelize(first, pad_depth(second, first.depth()));
    std::vector<LayerSpec> layers;
    const auto& ls1 = first.layers();
    const auto& ls2 = second.layers();
    layers.push_back(
        {vstack(ls1[0].matrix, ls2[0].matrix), concat_vec(ls1[0].bias, ls2[0].bias)});
    for (std::size_t l = 1; l < ls1.size(); ++l)
        layers.push_back(
            {block_diag(ls1[l].matrix, ls2[l].matrix), concat_vec(ls1[l].bias, ls2[l].bias)});
    return Network(first.input_dim(), std::move(layers));
}

Network parallelize_many(const std::vector<Network>& nets) {
    if (nets.empty()) throw std::invalid_argument("parallelize_many: need at least one network");
    int max_L = 0;
    for (const Network& n : nets) max_L = std::max(max_L, n.depth());
    Network result = pad_depth(nets.back(), max_L);
    for (std::size_t i = nets.size() - 1; i-- > 0;)
        result = parallelize(pad_depth(nets[i], max_L), result);
    return result;
}

Network pad_depth(const Network& net, int target_L) {
    if (target_L < net.depth())
        throw std::invalid_argument("pad_depth: target depth below current depth");
    if (target_L == net.depth()) return net;
    return sparse_concatenate(identity_network(net.output_dim(), target_L - net.depth()), net);
}

Network clamp_network(const Network& net, double B) {
    if (!(B > 0.0)) throw std::invalid_argument("clamp_network: B must be positive");
    const int k = net.output_dim();
    const double c = std::ceil(B);
    SparseMatrix a1 = SparseMatrix::zeros(2 * k, k);
    SparseVector b1 = SparseVector::zeros(2 * k);
    for (int i = 0; i < k; ++i) {
        a1.add(2 * i, i, 1.0);
        a1.add(2 * i + 1, i, 1.0);
        b1.add(2 * i, c);
        b1.add(2 * i + 1, -c);
    }
    SparseMatrix a2 = SparseMatrix::zeros(k, 2 * k);
    SparseVector b2 = SparseVector::zeros(k);
    for (int i = 0; i < k; ++i) {
        a2.add(i, 2 * i, 1.0);
        a2.add(i, 2 * i + 1, -1.0);
        b2.add(i, -c);
    }
    std::vector<LayerSpec> layers;
    layers.push_back({std::move(a1), std::move(b1)});
    layers.push_back({std::move(a2), std::move(b2)});
    Network clamp(k, std::move(layers));
    return sparse_concatenate(clamp, net);
}

}  // namespace relukit
