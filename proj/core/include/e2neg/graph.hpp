#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "e2neg/types.hpp"

namespace e2neg {

using Edge = std::pair<NodeId, NodeId>;

// Immutable simple undirected graph in compressed adjacency form, together
// with its dense node-feature matrix and optional class labels.
//
// Invariants (checked at construction):
//   * adjacency is symmetric, sorted per row, without self-loops or repeats;
//   * feature row count equals num_nodes();
//   * every label lies in [0, num_classes()).
//
// Features are held by shared pointer so that copies of a Graph, and every
// derived structure that aggregates over X, share one buffer.
class Graph {
 public:
  struct BuildStats {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_dropped = 0;
  };

  Graph() = default;

  // Symmetrizes and deduplicates `edges`; self-loops are dropped and counted.
  // Throws Error if an endpoint lies outside [0, features.rows()).
  static Graph build(std::span<const Edge> edges, Matrix features,
                     std::optional<std::vector<int>> labels = std::nullopt,
                     BuildStats* stats = nullptr);

  NodeId num_nodes() const noexcept { return num_nodes_; }
  std::size_t num_edges() const noexcept { return neighbors_.size() / 2; }
  Eigen::Index num_features() const noexcept { return features_ ? features_->cols() : 0; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    const auto begin = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v)]);
    const auto end = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v) + 1]);
    return {neighbors_.data() + begin, end - begin};
  }
  std::size_t degree(NodeId v) const noexcept { return neighbors(v).size(); }

  const std::vector<std::int64_t>& offsets() const noexcept { return offsets_; }
  const std::vector<NodeId>& adjacency() const noexcept { return neighbors_; }

  const Matrix& features() const noexcept { return *features_; }
  const std::shared_ptr<const Matrix>& shared_features() const noexcept { return features_; }

  bool has_labels() const noexcept { return labels_.has_value(); }
  const std::vector<int>& labels() const;
  int num_classes() const noexcept { return num_classes_; }

  // Canonical (u < v) edge list in lexicographic order.
  std::vector<Edge> edge_list() const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  NodeId num_nodes_ = 0;
  std::vector<std::int64_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::shared_ptr<const Matrix> features_ = std::make_shared<const Matrix>();
  std::optional<std::vector<int>> labels_;
  int num_classes_ = 0;
};

// Neighbor count of every node; sums to 2|E|.
Vector degree_vector(const Graph& g);

// Nodes within `hops` of `source` (source included), in BFS discovery order,
// which is nearest-first with ties broken by discovery. When `cap` is given the
// result is truncated to at most `cap` nodes.
std::vector<NodeId> k_hop_node_set(const Graph& g, NodeId source, int hops,
                                   std::optional<std::size_t> cap = std::nullopt);

// Connected-component label per node, components numbered by smallest member.
std::vector<int> connected_components(const Graph& g);

}  // namespace e2neg
