#include "e2neg/encoder.hpp"

#include <cmath>
#include <random>
#include <string>

#include "e2neg/error.hpp"
#include "e2neg/random.hpp"

namespace e2neg {

namespace {

Matrix uniform(Eigen::Index rows, Eigen::Index cols, double limit, Rng& rng) {
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

Matrix relu(const Matrix& m) { return m.cwiseMax(0.0); }

void check_width(const Matrix& m, Eigen::Index expected, const char* what) {
  if (m.cols() != expected) {
    throw Error(std::string(what) + ": expected width " + std::to_string(expected) + ", got " +
                std::to_string(m.cols()));
  }
}

}  // namespace

ParamSet ParamSet::zeros_like(const ParamSet& p) {
  ParamSet z;
  auto dst = z.tensors();
  const auto src = p.tensors();
  for (std::size_t i = 0; i < kCount; ++i) *dst[i] = Matrix::Zero(src[i]->rows(), src[i]->cols());
  return z;
}

bool ParamSet::all_finite() const {
  for (const Matrix* t : tensors()) {
    if (!t->allFinite()) return false;
  }
  return true;
}

EncoderParams init_params(Eigen::Index input_dim, Eigen::Index hidden_dim, std::uint64_t seed) {
  if (input_dim < 1 || hidden_dim < 1) throw Error("init_params: dimensions must be positive");
  Rng rng = make_rng(seed, Stage::kInit);
  const auto glorot = [](Eigen::Index in, Eigen::Index out) {
    return std::sqrt(6.0 / static_cast<double>(in + out));
  };
  const double bias_limit = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  EncoderParams p;
  p.weights.gcn_weight = uniform(input_dim, hidden_dim, glorot(input_dim, hidden_dim), rng);
  p.weights.mlp_w1 = uniform(hidden_dim, hidden_dim, glorot(hidden_dim, hidden_dim), rng);
  p.weights.mlp_b1 = uniform(1, hidden_dim, bias_limit, rng);
  p.weights.mlp_w2 = uniform(hidden_dim, hidden_dim, glorot(hidden_dim, hidden_dim), rng);
  p.weights.mlp_b2 = uniform(1, hidden_dim, bias_limit, rng);
  p.adam.first_moment = ParamSet::zeros_like(p.weights);
  p.adam.second_moment = ParamSet::zeros_like(p.weights);
  return p;
}

ForwardCache forward(const SparseOperator& op, const Matrix& x, const ParamSet& p,
                     std::span<const NodeId> rows) {
  if (x.cols() != p.input_dim()) {
    throw Error("forward: feature width " + std::to_string(x.cols()) + " does not match encoder input " +
                std::to_string(p.input_dim()));
  }
  ForwardCache c;
  c.rows.assign(rows.begin(), rows.end());
  c.aggregated = op.multiply_rows(rows, x);
  c.gcn_pre.noalias() = c.aggregated * p.gcn_weight;
  c.h = relu(c.gcn_pre);
  c.mlp_pre.noalias() = c.h * p.mlp_w1;
  c.mlp_pre.rowwise() += p.mlp_b1.row(0);
  c.mlp_hidden = relu(c.mlp_pre);
  c.z.noalias() = c.mlp_hidden * p.mlp_w2;
  c.z.rowwise() += p.mlp_b2.row(0);
  return c;
}

Matrix gcn_forward(const SparseOperator& op, const Matrix& x, const ParamSet& p) {
  if (op.size() != x.rows()) {
    throw Error("gcn_forward: operator size " + std::to_string(op.size()) + " does not match " +
                std::to_string(x.rows()) + " feature rows");
  }
  if (x.cols() != p.input_dim()) {
    throw Error("gcn_forward: feature width " + std::to_string(x.cols()) + " does not match encoder input " +
                std::to_string(p.input_dim()));
  }
  Matrix ax(x.rows(), x.cols());
  for (NodeId r = 0; r < op.size(); ++r) {
    ax.row(r).setZero();
    const auto cols = op.row_cols(r);
    const auto vals = op.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) ax.row(r) += vals[k] * x.row(cols[k]);
  }
  Matrix h = ax * p.gcn_weight;
  return relu(h);
}

Matrix project(const Matrix& h, const ParamSet& p) {
  check_width(h, p.mlp_w1.rows(), "project");
  Matrix pre = h * p.mlp_w1;
  pre.rowwise() += p.mlp_b1.row(0);
  Matrix z = relu(pre) * p.mlp_w2;
  z.rowwise() += p.mlp_b2.row(0);
  return z;
}

void backward(const ForwardCache& c, const Matrix& dz, const ParamSet& p, ParamSet& g) {
  if (dz.rows() != c.z.rows() || dz.cols() != c.z.cols()) throw Error("backward: gradient shape mismatch");
  g.mlp_w2.noalias() += c.mlp_hidden.transpose() * dz;
  g.mlp_b2 += dz.colwise().sum();
  Matrix d_pre1 = dz * p.mlp_w2.transpose();
  d_pre1.array() *= (c.mlp_pre.array() > 0.0).cast<double>();
  g.mlp_w1.noalias() += c.h.transpose() * d_pre1;
  g.mlp_b1 += d_pre1.colwise().sum();
  Matrix d_gcn = d_pre1 * p.mlp_w1.transpose();
  d_gcn.array() *= (c.gcn_pre.array() > 0.0).cast<double>();
  g.gcn_weight.noalias() += c.aggregated.transpose() * d_gcn;
}

}  // namespace e2neg
