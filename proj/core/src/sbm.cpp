#include "e2neg/sbm.hpp"

#include <random>

#include "e2neg/error.hpp"
#include "e2neg/random.hpp"

namespace e2neg {

SbmDataset generate_sbm(const SbmParams& params) {
  if (params.blocks < 1 || params.nodes_per_block < 1) throw Error("sbm needs at least one block and one node");
  if (!(params.p_out >= 0.0 && params.p_out < params.p_in && params.p_in <= 1.0)) {
    throw Error("sbm requires 0 <= p_out < p_in <= 1");
  }
  SbmDataset out;
  out.semantics = synthesize_blocks(params.blocks, params.feature_dim, params.separation, params.delta,
                                    params.nodes_per_block, derive_seed(params.seed, Stage::kSynthetic, 1));

  const auto n = static_cast<NodeId>(params.blocks) * params.nodes_per_block;
  const auto& block = out.semantics.assignments;
  Rng rng = make_rng(params.seed, Stage::kSynthetic, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const double p = block[static_cast<std::size_t>(u)] == block[static_cast<std::size_t>(v)] ? params.p_in
                                                                                                 : params.p_out;
      if (unit(rng) < p) edges.emplace_back(u, v);
    }
  }
  out.graph = Graph::build(edges, out.semantics.features(), block);
  return out;
}

}  // namespace e2neg
