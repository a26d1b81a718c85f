#pragma once

#include <cstdint>

#include "e2neg/graph.hpp"
#include "e2neg/theory.hpp"

namespace e2neg {

struct SbmParams {
  int blocks = 3;
  int nodes_per_block = 100;
  double p_in = 0.1;
  double p_out = 0.01;
  int feature_dim = 16;
  double separation = 4.0;
  double delta = 1.0;
  std::uint64_t seed = 0;
};

struct SbmDataset {
  Graph graph;  // labels are the planted block ids
  SemanticBlockModel semantics;
};

// Planted-partition graph: each pair is joined independently with p_in inside
// a block and p_out across. Features follow the semantic-block model with the
// same block assignment. Throws Error unless 0 <= p_out < p_in <= 1.
SbmDataset generate_sbm(const SbmParams& params);

}  // namespace e2neg
