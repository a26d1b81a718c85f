#include "e2neg/topology.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "e2neg/error.hpp"

namespace e2neg {

std::vector<NodeId> ReconstructedGraph::centers() const {
  std::vector<NodeId> out;
  out.reserve(subgraphs.size());
  for (const auto& s : subgraphs) out.push_back(s.center);
  return out;
}

std::vector<Edge> ReconstructedGraph::directed_edges() const {
  std::vector<Edge> out;
  for (const auto& s : subgraphs) {
    for (NodeId m : s.members) out.emplace_back(m, s.center);
  }
  return out;
}

std::size_t ReconstructedGraph::covered_nodes() const {
  std::size_t total = 0;
  for (const auto& s : subgraphs) total += s.members.size() + 1;
  return total;
}

void ReconstructedGraph::validate() const {
  std::vector<char> seen(static_cast<std::size_t>(num_nodes), 0);
  auto claim = [&](NodeId v) {
    if (v < 0 || v >= num_nodes) throw Error("reconstructed graph: node id " + std::to_string(v) + " out of range");
    if (seen[static_cast<std::size_t>(v)]) {
      throw Error("reconstructed graph: node " + std::to_string(v) + " appears in more than one star");
    }
    seen[static_cast<std::size_t>(v)] = 1;
  };
  for (const auto& s : subgraphs) claim(s.center);
  for (const auto& s : subgraphs) {
    for (NodeId m : s.members) claim(m);
  }
}

ReconstructedGraph reconstruct(const Graph& g, std::span<const NodeId> centers, int hops,
                               std::size_t neighbor_cap) {
  if (hops < 1) throw Error("reconstruct: hops must be >= 1");
  if (neighbor_cap < 1) throw Error("reconstruct: neighbor_cap must be >= 1");

  const auto n = static_cast<std::size_t>(g.num_nodes());
  std::vector<char> taken(n, 0);
  for (NodeId c : centers) {
    if (c < 0 || c >= g.num_nodes()) throw Error("reconstruct: center " + std::to_string(c) + " out of range");
    if (taken[static_cast<std::size_t>(c)]) throw Error("reconstruct: duplicate center " + std::to_string(c));
    taken[static_cast<std::size_t>(c)] = 1;
  }

  ReconstructedGraph r;
  r.num_nodes = g.num_nodes();
  r.features = g.shared_features();
  r.subgraphs.reserve(centers.size());
  for (NodeId c : centers) {
    Star star;
    star.center = c;
    // The ball is walked in BFS order; members already owned by an earlier
    // center are skipped without shrinking the ball.
    for (NodeId v : k_hop_node_set(g, c, hops)) {
      if (star.members.size() == neighbor_cap) break;
      if (taken[static_cast<std::size_t>(v)]) continue;
      taken[static_cast<std::size_t>(v)] = 1;
      star.members.push_back(v);
    }
    r.subgraphs.push_back(std::move(star));
  }
  return r;
}

ReconstructedGraph reconstruct(const Graph& g, const ClusterModel& clusters, int hops,
                               std::size_t neighbor_cap) {
  return reconstruct(g, std::span<const NodeId>(clusters.centers), hops, neighbor_cap);
}

std::vector<int> random_derangement(int k, Rng& rng) {
  if (k < 2) throw Error("augmentation requires >= 2 centers");
  std::vector<int> p(static_cast<std::size_t>(k));
  while (true) {
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) ok = p[static_cast<std::size_t>(i)] != i;
    if (ok) return p;
  }
}

AugmentedGraph apply_center_permutation(const ReconstructedGraph& r, std::vector<int> permutation) {
  if (permutation.size() != r.subgraphs.size()) throw Error("center permutation has wrong length");
  AugmentedGraph a;
  a.view = r;
  for (std::size_t i = 0; i < permutation.size(); ++i) {
    const int src = permutation[i];
    if (src < 0 || static_cast<std::size_t>(src) >= r.subgraphs.size()) throw Error("center permutation out of range");
    a.view.subgraphs[i].center = r.subgraphs[static_cast<std::size_t>(src)].center;
  }
  a.center_permutation = std::move(permutation);
  return a;
}

AugmentedGraph augment(const ReconstructedGraph& r, std::uint64_t seed) {
  if (r.k() < 2) throw Error("augmentation requires >= 2 centers");
  Rng rng(seed);
  return apply_center_permutation(r, random_derangement(r.k(), rng));
}

SparseOperator to_propagation_operator(const ReconstructedGraph& r) {
  std::vector<SparseOperator::Triplet> t;
  std::vector<char> is_center(static_cast<std::size_t>(r.num_nodes), 0);
  for (const auto& s : r.subgraphs) {
    is_center[static_cast<std::size_t>(s.center)] = 1;
    const double w = 1.0 / static_cast<double>(s.members.size() + 1);
    t.push_back({s.center, s.center, w});
    for (NodeId m : s.members) t.push_back({s.center, m, w});
  }
  for (NodeId v = 0; v < r.num_nodes; ++v) {
    if (!is_center[static_cast<std::size_t>(v)]) t.push_back({v, v, 1.0});
  }
  return SparseOperator::from_triplets(r.num_nodes, std::move(t));
}

SparseOperator to_propagation_operator(const AugmentedGraph& a) { return to_propagation_operator(a.view); }

}  // namespace e2neg
