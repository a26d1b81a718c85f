#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "e2neg/graph.hpp"
#include "e2neg/types.hpp"

namespace e2neg {

// Square sparse operator in compressed-row form. Column indices are sorted
// within each row. Immutable once built.
class SparseOperator {
 public:
  struct Triplet {
    NodeId row;
    NodeId col;
    double value;
  };

  SparseOperator() = default;

  // Entries with equal (row, col) are summed.
  static SparseOperator from_triplets(NodeId n, std::vector<Triplet> triplets);

  NodeId size() const noexcept { return n_; }
  std::size_t nonzeros() const noexcept { return cols_.size(); }

  std::span<const NodeId> row_cols(NodeId r) const noexcept {
    return {cols_.data() + row_ptr_[static_cast<std::size_t>(r)], row_len(r)};
  }
  std::span<const double> row_values(NodeId r) const noexcept {
    return {values_.data() + row_ptr_[static_cast<std::size_t>(r)], row_len(r)};
  }

  // y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector multiply(const Vector& x) const;
  // Y = A X for a dense block of column vectors.
  Eigen::MatrixXd multiply(const Eigen::MatrixXd& x) const;

  // Rows `rows` of (A X), one output row per requested row.
  Matrix multiply_rows(std::span<const NodeId> rows, const Matrix& x) const;

  double coeff(NodeId r, NodeId c) const noexcept;
  Eigen::MatrixXd to_dense() const;
  bool is_symmetric(double tol) const;

 private:
  std::size_t row_len(NodeId r) const noexcept {
    return static_cast<std::size_t>(row_ptr_[static_cast<std::size_t>(r) + 1] -
                                    row_ptr_[static_cast<std::size_t>(r)]);
  }

  NodeId n_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<NodeId> cols_;
  std::vector<double> values_;
};

// L = I - D^{-1/2} A D^{-1/2}. Isolated nodes get D^{-1/2} = 0, i.e. a unit
// diagonal and no off-diagonal entries.
SparseOperator normalized_laplacian(const Graph& g);

// D~^{-1/2} (A + I) D~^{-1/2} with D~ = D + I: the standard GCN propagation.
SparseOperator gcn_normalized_adjacency(const Graph& g);

}  // namespace e2neg
