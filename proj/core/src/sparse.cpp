#include "e2neg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "e2neg/error.hpp"

namespace e2neg {

SparseOperator SparseOperator::from_triplets(NodeId n, std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw Error("sparse triplet index out of range");
    }
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseOperator op;
  op.n_ = n;
  op.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  op.cols_.reserve(triplets.size());
  op.values_.reserve(triplets.size());
  for (std::size_t i = 0; i < triplets.size();) {
    const auto& t = triplets[i];
    double v = 0.0;
    std::size_t j = i;
    for (; j < triplets.size() && triplets[j].row == t.row && triplets[j].col == t.col; ++j) {
      v += triplets[j].value;
    }
    op.cols_.push_back(t.col);
    op.values_.push_back(v);
    ++op.row_ptr_[static_cast<std::size_t>(t.row) + 1];
    i = j;
  }
  for (std::size_t r = 1; r < op.row_ptr_.size(); ++r) op.row_ptr_[r] += op.row_ptr_[r - 1];
  return op;
}

void SparseOperator::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(n_) || y.size() != static_cast<std::size_t>(n_)) {
    throw Error("SparseOperator::multiply: dimension mismatch");
  }
  for (NodeId r = 0; r < n_; ++r) {
    const auto cols = row_cols(r);
    const auto vals = row_values(r);
    double acc = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) acc += vals[k] * x[static_cast<std::size_t>(cols[k])];
    y[static_cast<std::size_t>(r)] = acc;
  }
}

Vector SparseOperator::multiply(const Vector& x) const {
  Vector y(n_);
  multiply(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
           std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
  return y;
}

Eigen::MatrixXd SparseOperator::multiply(const Eigen::MatrixXd& x) const {
  if (x.rows() != n_) throw Error("SparseOperator::multiply: dimension mismatch");
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n_, x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    multiply(std::span<const double>(x.col(c).data(), static_cast<std::size_t>(n_)),
             std::span<double>(y.col(c).data(), static_cast<std::size_t>(n_)));
  }
  return y;
}

Matrix SparseOperator::multiply_rows(std::span<const NodeId> rows, const Matrix& x) const {
  if (x.rows() != n_) throw Error("SparseOperator::multiply_rows: operator has " +
                                  std::to_string(n_) + " columns but input has " +
                                  std::to_string(x.rows()) + " rows");
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const NodeId r = rows[i];
    if (r < 0 || r >= n_) throw Error("SparseOperator::multiply_rows: row out of range");
    const auto cols = row_cols(r);
    const auto vals = row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      out.row(static_cast<Eigen::Index>(i)) += vals[k] * x.row(cols[k]);
    }
  }
  return out;
}

double SparseOperator::coeff(NodeId r, NodeId c) const noexcept {
  const auto cols = row_cols(r);
  const auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) return 0.0;
  return row_values(r)[static_cast<std::size_t>(it - cols.begin())];
}

Eigen::MatrixXd SparseOperator::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
  for (NodeId r = 0; r < n_; ++r) {
    const auto cols = row_cols(r);
    const auto vals = row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) d(r, cols[k]) += vals[k];
  }
  return d;
}

bool SparseOperator::is_symmetric(double tol) const {
  for (NodeId r = 0; r < n_; ++r) {
    const auto cols = row_cols(r);
    const auto vals = row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (std::abs(vals[k] - coeff(cols[k], r)) > tol) return false;
    }
  }
  return true;
}

namespace {

Vector inv_sqrt_or_zero(const Vector& d) {
  Vector out(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) out[i] = d[i] > 0.0 ? 1.0 / std::sqrt(d[i]) : 0.0;
  return out;
}

}  // namespace

SparseOperator normalized_laplacian(const Graph& g) {
  const Vector s = inv_sqrt_or_zero(degree_vector(g));
  std::vector<SparseOperator::Triplet> t;
  t.reserve(g.adjacency().size() + static_cast<std::size_t>(g.num_nodes()));
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    t.push_back({u, u, 1.0});
    for (NodeId v : g.neighbors(u)) t.push_back({u, v, -s[u] * s[v]});
  }
  return SparseOperator::from_triplets(g.num_nodes(), std::move(t));
}

SparseOperator gcn_normalized_adjacency(const Graph& g) {
  Vector d = degree_vector(g);
  d.array() += 1.0;
  const Vector s = inv_sqrt_or_zero(d);
  std::vector<SparseOperator::Triplet> t;
  t.reserve(g.adjacency().size() + static_cast<std::size_t>(g.num_nodes()));
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    t.push_back({u, u, s[u] * s[u]});
    for (NodeId v : g.neighbors(u)) t.push_back({u, v, s[u] * s[v]});
  }
  return SparseOperator::from_triplets(g.num_nodes(), std::move(t));
}

}  // namespace e2neg
