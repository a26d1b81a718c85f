#pragma once

#include <cstdint>
#include <span>

#include "e2neg/types.hpp"

namespace e2neg {

enum class NegativeMode {
  // Positive + cross-view negatives + intra-view negatives.
  kCrossAndIntra,
  // Positive + the cross-view negative set counted twice, with no intra-view
  // term.
  kCrossOnly,
};

struct LossResult {
  double loss = 0.0;
  Matrix grad_a;  // d loss / d rows of view a
  Matrix grad_b;  // d loss / d rows of view b
  // Exponentiated similarity terms evaluated across all denominators:
  // 2 * m * (2m - 1) for m anchors.
  std::uint64_t similarity_terms = 0;
};

// Symmetrized InfoNCE over m paired rows: row i of `a` and row i of `b` are a
// positive pair; every other row of either view is a negative. Similarities
// are cosine, divided by `tau`. The loss is the mean over the 2m anchors.
// Throws TrainingError if any row has zero norm.
LossResult infonce_loss(const Matrix& a, const Matrix& b, double tau,
                        NegativeMode mode = NegativeMode::kCrossAndIntra, bool with_gradient = true);

// Centers-only form: reads rows `rows_a` of z_a and `rows_b` of z_b and pairs
// them index by index. Gradients are returned per selected row.
LossResult infonce_center_loss(const Matrix& z_a, const Matrix& z_b, std::span<const NodeId> rows_a,
                               std::span<const NodeId> rows_b, double tau,
                               NegativeMode mode = NegativeMode::kCrossAndIntra,
                               bool with_gradient = true);

inline std::uint64_t similarity_term_count(std::uint64_t anchors) noexcept {
  return anchors == 0 ? 0 : 2 * anchors * (2 * anchors - 1);
}

}  // namespace e2neg
