#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "e2neg/sparse.hpp"
#include "e2neg/types.hpp"

namespace e2neg {

// The five trainable tensors. Reused for gradients and for Adam moments.
struct ParamSet {
  Matrix gcn_weight;  // F x D
  Matrix mlp_w1;      // D x D
  Matrix mlp_b1;      // 1 x D
  Matrix mlp_w2;      // D x D
  Matrix mlp_b2;      // 1 x D

  static constexpr std::size_t kCount = 5;
  static constexpr std::array<std::string_view, kCount> kNames = {"gcn_weight", "mlp_w1", "mlp_b1",
                                                                  "mlp_w2", "mlp_b2"};

  std::array<Matrix*, kCount> tensors() noexcept { return {&gcn_weight, &mlp_w1, &mlp_b1, &mlp_w2, &mlp_b2}; }
  std::array<const Matrix*, kCount> tensors() const noexcept {
    return {&gcn_weight, &mlp_w1, &mlp_b1, &mlp_w2, &mlp_b2};
  }

  Eigen::Index input_dim() const noexcept { return gcn_weight.rows(); }
  Eigen::Index hidden_dim() const noexcept { return gcn_weight.cols(); }

  static ParamSet zeros_like(const ParamSet& p);
  bool all_finite() const;
};

struct AdamState {
  std::int64_t step = 0;
  ParamSet first_moment;
  ParamSet second_moment;
};

struct EncoderParams {
  ParamSet weights;
  AdamState adam;
};

// Glorot-uniform weights, biases uniform in +-1/sqrt(fan_in), zero moments.
EncoderParams init_params(Eigen::Index input_dim, Eigen::Index hidden_dim, std::uint64_t seed);

// Activations of one forward pass restricted to a subset of rows. Everything
// backward() needs is kept here.
struct ForwardCache {
  std::vector<NodeId> rows;
  Matrix aggregated;  // (op X)[rows]
  Matrix gcn_pre;     // aggregated * W
  Matrix h;           // relu(gcn_pre)
  Matrix mlp_pre;     // h * W1 + b1
  Matrix mlp_hidden;  // relu(mlp_pre)
  Matrix z;           // mlp_hidden * W2 + b2
};

ForwardCache forward(const SparseOperator& op, const Matrix& x, const ParamSet& p,
                     std::span<const NodeId> rows);

// H = relu(op X W) over all rows.
Matrix gcn_forward(const SparseOperator& op, const Matrix& x, const ParamSet& p);

// Z = relu(H W1 + b1) W2 + b2, row-wise.
Matrix project(const Matrix& h, const ParamSet& p);

// Accumulates d(loss)/d(params) into `grads`, given d(loss)/dZ for the cached rows.
void backward(const ForwardCache& cache, const Matrix& dz, const ParamSet& p, ParamSet& grads);

}  // namespace e2neg
