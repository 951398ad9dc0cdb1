#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace relukit {

// One explicitly stored matrix entry. Entries are kept sorted by (row, col)
// and are expected to be nonzero; zeros are rejected by add() and reported
// by validate() when they sneak in through deserialization.
struct MatrixEntry {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

struct VectorEntry {
    int index = 0;
    double value = 0.0;
};

struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<MatrixEntry> entries;  // sorted by (row, col), unique positions

    static SparseMatrix zeros(int rows, int cols);
    static SparseMatrix identity(int n);

    // Inserts a nonzero entry; throws on zero value or duplicate/unsorted use.
    void add(int row, int col, double value);
    // Sorts entries and drops exact zeros; throws on duplicates.
    void normalize();
    std::size_t nnz() const { return entries.size(); }
};

struct SparseVector {
    int size = 0;
    std::vector<VectorEntry> entries;  // sorted by index, unique

    static SparseVector zeros(int size);
    void add(int index, double value);
    void normalize();
    std::size_t nnz() const { return entries.size(); }
};

struct LayerSpec {
    SparseMatrix matrix;
    SparseVector bias;
};

// A network is an immutable sequence of affine layers. The realization applies
// ReLU after every layer except the last one, which stays affine.
class Network {
  public:
    Network(int input_dim, std::vector<LayerSpec> layers);

    int input_dim() const { return input_dim_; }
    int output_dim() const { return layers_.back().matrix.rows; }
    const std::vector<LayerSpec>& layers() const { return layers_; }

    int depth() const { return static_cast<int>(layers_.size()); }
    std::size_t num_weights() const;
    std::size_t num_neurons() const;

    std::vector<double> realize(const std::vector<double>& x) const;

    // Evaluates the network on n points laid out row-major (n x input_dim);
    // returns n x output_dim row-major. Same arithmetic as realize(), batched.
    std::vector<double> realize_batch(const double* points, std::size_t n) const;

    // Returns every invariant violation as a human-readable message; empty
    // result means the network is well formed.
    std::vector<std::string> validate() const;

  private:
    int input_dim_;
    std::vector<LayerSpec> layers_;
};

}  // namespace relukit
