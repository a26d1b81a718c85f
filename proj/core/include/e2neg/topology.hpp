#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "e2neg/graph.hpp"
#include "e2neg/random.hpp"
#include "e2neg/sparse.hpp"
#include "e2neg/spectral.hpp"

namespace e2neg {

// One directed star: every member points at the center.
struct Star {
  NodeId center = -1;
  std::vector<NodeId> members;

  friend bool operator==(const Star&, const Star&) = default;
};

// Forest of disjoint directed stars around the cluster centers. Nodes that no
// center claimed are not part of it. Shares the feature matrix of the source
// graph.
struct ReconstructedGraph {
  NodeId num_nodes = 0;
  std::vector<Star> subgraphs;
  std::shared_ptr<const Matrix> features;

  int k() const noexcept { return static_cast<int>(subgraphs.size()); }
  std::vector<NodeId> centers() const;
  // (member, center) pairs in subgraph order.
  std::vector<Edge> directed_edges() const;
  std::size_t covered_nodes() const;
  // Throws Error on overlapping stars, a center appearing as a member, or ids
  // out of range.
  void validate() const;
};

// Second view: star i keeps its member set but is now centered on
// original center number center_permutation[i].
struct AugmentedGraph {
  ReconstructedGraph view;
  std::vector<int> center_permutation;
};

// Centers claim members in ascending cluster-index order; within a center,
// candidates are taken nearest-first in BFS order. A node already claimed, or
// itself a center, is skipped. At most `neighbor_cap` members per star.
ReconstructedGraph reconstruct(const Graph& g, std::span<const NodeId> centers, int hops,
                               std::size_t neighbor_cap);
ReconstructedGraph reconstruct(const Graph& g, const ClusterModel& clusters, int hops,
                               std::size_t neighbor_cap);

// Uniform over derangements of {0..k-1} (rejection from uniform shuffles).
std::vector<int> random_derangement(int k, Rng& rng);

AugmentedGraph apply_center_permutation(const ReconstructedGraph& r, std::vector<int> permutation);

// Throws Error for k < 2, where no derangement exists.
AugmentedGraph augment(const ReconstructedGraph& r, std::uint64_t seed);

// Row-stochastic mean aggregation: each center row averages itself and its
// members; every other row is the identity.
SparseOperator to_propagation_operator(const ReconstructedGraph& r);
SparseOperator to_propagation_operator(const AugmentedGraph& a);

}  // namespace e2neg
