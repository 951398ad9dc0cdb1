#include "relukit/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relukit {

SparseMatrix SparseMatrix::zeros(int rows, int cols) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("SparseMatrix: rows and cols must be positive");
    SparseMatrix m;
    m.rows = rows;
    m.cols = cols;
    return m;
}

SparseMatrix SparseMatrix::identity(int n) {
    SparseMatrix m = zeros(n, n);
    for (int i = 0; i < n; ++i) m.entries.push_back({i, i, 1.0});
    return m;
}

void SparseMatrix::add(int row, int col, double value) {
    if (row < 0 || row >= rows || col < 0 || col >= cols)
        throw std::invalid_argument("SparseMatrix::add: index out of range");
    if (value == 0.0) throw std::invalid_argument("SparseMatrix::add: zero value");
    if (!entries.empty()) {
        const MatrixEntry& last = entries.back();
        if (last.row > row || (last.row == row && last.col >= col)) {
            entries.push_back({row, col, value});
            normalize();
            return;
        }
    }
    entries.push_back({row, col, value});
}

void SparseMatrix::normalize() {
    std::sort(entries.begin(), entries.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (entries[i - 1].row == entries[i].row && entries[i - 1].col == entries[i].col)
            throw std::invalid_argument("SparseMatrix: duplicate entry position");
    std::erase_if(entries, [](const MatrixEntry& e) { return e.value == 0.0; });
}

SparseVector SparseVector::zeros(int size) {
    if (size < 1) throw std::invalid_argument("SparseVector: size must be positive");
    SparseVector v;
    v.size = size;
    return v;
}

void SparseVector::add(int index, double value) {
    if (index < 0 || index >= size)
        throw std::invalid_argument("SparseVector::add: index out of range");
    if (value == 0.0) throw std::invalid_argument("SparseVector::add: zero value");
    entries.push_back({index, value});
    if (entries.size() > 1 && entries[entries.size() - 2].index >= index) normalize();
}

void SparseVector::normalize() {
    std::sort(entries.begin(), entries.end(),
              [](const VectorEntry& a, const VectorEntry& b) { return a.index < b.index; });
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (entries[i - 1].index == entries[i].index)
            throw std::invalid_argument("SparseVector: duplicate entry position");
    std::erase_if(entries, [](const VectorEntry& e) { return e.value == 0.0; });
}

Network::Network(int input_dim, std::vector<LayerSpec> layers)
    : input_dim_(input_dim), layers_(std::move(layers)) {
    if (input_dim_ < 1) throw std::invalid_argument("Network: input_dim must be positive");
    if (layers_.empty()) throw std::invalid_argument("Network: needs at least one layer");
    int prev = input_dim_;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const LayerSpec& layer = layers_[l];
        const std::string where = "layer " + std::to_string(l + 1);
        if (layer.matrix.rows < 1 || layer.matrix.cols < 1)
            throw std::invalid_argument("Network: " + where + " has empty shape");
        if (layer.matrix.cols != prev)
            throw std::invalid_argument("Network: " + where + " expects " +
                                        std::to_string(layer.matrix.cols) +
                                        " inputs but previous width is " + std::to_string(prev));
        if (layer.bias.size != layer.matrix.rows)
            throw std::invalid_argument("Network: " + where + " bias length mismatch");
        for (const MatrixEntry& e : layer.matrix.entries)
            if (e.row < 0 || e.row >= layer.matrix.rows || e.col < 0 || e.col >= layer.matrix.cols)
                throw std::invalid_argument("Network: " + where + " matrix index out of range");
        for (const VectorEntry& e : layer.bias.entries)
            if (e.index < 0 || e.index >= layer.bias.size)
                throw std::invalid_argument("Network: " + where + " bias index out of range");
        for (std::size_t i = 1; i < layer.matrix.entries.size(); ++i) {
            const MatrixEntry& a = layer.matrix.entries[i - 1];
            const MatrixEntry& b = layer.matrix.entries[i];
            if (a.row > b.row || (a.row == b.row && a.col >= b.col))
                throw std::invalid_argument("Network: " + where + " entries not sorted/unique");
        }
        for (std::size_t i = 1; i < layer.bias.entries.size(); ++i)
            if (layer.bias.entries[i - 1].index >= layer.bias.entries[i].index)
                throw std::invalid_argument("Network: " + where + " bias entries not sorted/unique");
        prev = layer.matrix.rows;
    }
}

std::size_t Network::num_weights() const {
    std::size_t m = 0;
    for (const LayerSpec& layer : layers_) m += layer.matrix.nnz() + layer.bias.nnz();
    return m;
}

std::size_t Network::num_neurons() const {
    std::size_t n = static_cast<std::size_t>(input_dim_);
    for (const LayerSpec& layer : layers_) n += static_cast<std::size_t>(layer.matrix.rows);
    return n;
}

std::vector<double> Network::realize(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != input_dim_)
        throw std::invalid_argument("realize: expected input of length " +
                                    std::to_string(input_dim_) + ", got " +
                                    std::to_string(x.size()));
    std::vector<double> cur = x;
    std::vector<double> next;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const LayerSpec& layer = layers_[l];
        next.assign(static_cast<std::size_t>(layer.matrix.rows), 0.0);
        for (const VectorEntry& e : layer.bias.entries) next[e.index] = e.value;
        for (const MatrixEntry& e : layer.matrix.entries) next[e.row] += e.value * cur[e.col];
        if (l + 1 < layers_.size())
            for (double& v : next) v = v > 0.0 ? v : 0.0;
        cur.swap(next);
    }
    return cur;
}

std::vector<double> Network::realize_batch(const double* points, std::size_t n) const {
    const std::size_t d = static_cast<std::size_t>(input_dim_);
    const std::size_t out_dim = static_cast<std::size_t>(output_dim());
    std::vector<double> result(n * out_dim);

    std::size_t max_width = d;
    for (const LayerSpec& layer : layers_)
        max_width = std::max(max_width, static_cast<std::size_t>(layer.matrix.rows));

    constexpr std::size_t kTile = 64;
    std::vector<double> cur(max_width * kTile), next(max_width * kTile);

    for (std::size_t base = 0; base < n; base += kTile) {
        const std::size_t t = std::min(kTile, n - base);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t b = 0; b < t; ++b) cur[j * kTile + b] = points[(base + b) * d + j];
        for (std::size_t l = 0; l < layers_.size(); ++l) {
            const LayerSpec& layer = layers_[l];
            const std::size_t rows = static_cast<std::size_t>(layer.matrix.rows);
            std::fill(next.begin(), next.begin() + rows * kTile, 0.0);
            for (const VectorEntry& e : layer.bias.entries) {
                double* row = &next[static_cast<std::size_t>(e.index) * kTile];
                for (std::size_t b = 0; b < t; ++b) row[b] = e.value;
            }
            for (const MatrixEntry& e : layer.matrix.entries) {
                double* row = &next[static_cast<std::size_t>(e.row) * kTile];
                const double* src = &cur[static_cast<std::size_t>(e.col) * kTile];
                const double w = e.value;
                for (std::size_t b = 0; b < t; ++b) row[b] += w * src[b];
            }
            if (l + 1 < layers_.size())
                for (std::size_t i = 0; i < rows * kTile; ++i)
                    next[i] = next[i] > 0.0 ? next[i] : 0.0;
            cur.swap(next);
        }
        for (std::size_t r = 0; r < out_dim; ++r)
            for (std::size_t b = 0; b < t; ++b)
                result[(base + b) * out_dim + r] = cur[r * kTile + b];
    }
    return result;
}

std::vector<std::string> Network::validate() const {
    std::vector<std::string> violations;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const LayerSpec& layer = layers_[l];
        const std::string where = "layer " + std::to_string(l + 1);
        for (const MatrixEntry& e : layer.matrix.entries) {
            if (e.value == 0.0)
                violations.push_back(where + ": explicit zero matrix entry at (" +
                                     std::to_string(e.row) + "," + std::to_string(e.col) + ")");
            else if (!std::isfinite(e.value))
                violations.push_back(where + ": non-finite matrix entry at (" +
                                     std::to_string(e.row) + "," + std::to_string(e.col) + ")");
        }
        for (const VectorEntry& e : layer.bias.entries) {
            if (e.value == 0.0)
                violations.push_back(where + ": explicit zero bias entry at " +
                                     std::to_string(e.index));
            else if (!std::isfinite(e.value))
                violations.push_back(where + ": non-finite bias entry at " +
                                     std::to_string(e.index));
        }
    }
    return violations;
}

}  // namespace relukit
