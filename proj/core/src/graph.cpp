#include "e2neg/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "e2neg/error.hpp"

namespace e2neg {

Graph Graph::build(std::span<const Edge> edges, Matrix features,
                   std::optional<std::vector<int>> labels, BuildStats* stats) {
  Graph g;
  const auto n = static_cast<NodeId>(features.rows());
  g.num_nodes_ = n;

  BuildStats local;
  std::vector<Edge> directed;
  directed.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw Error("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                  ") references a node outside [0, " + std::to_string(n) + ")");
    }
    if (u == v) {
      ++local.self_loops_dropped;
      continue;
    }
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  std::sort(directed.begin(), directed.end());
  const auto before = directed.size();
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());
  local.duplicates_dropped = (before - directed.size()) / 2;

  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : directed) ++g.offsets_[static_cast<std::size_t>(e.first) + 1];
  for (std::size_t i = 1; i < g.offsets_.size(); ++i) g.offsets_[i] += g.offsets_[i - 1];
  g.neighbors_.reserve(directed.size());
  for (const auto& e : directed) g.neighbors_.push_back(e.second);

  if (labels) {
    if (labels->size() != static_cast<std::size_t>(n)) {
      throw Error("label count " + std::to_string(labels->size()) + " does not match node count " +
                  std::to_string(n));
    }
    int max_label = -1;
    for (std::size_t i = 0; i < labels->size(); ++i) {
      if ((*labels)[i] < 0) {
        throw Error("negative label at node " + std::to_string(i));
      }
      max_label = std::max(max_label, (*labels)[i]);
    }
    g.num_classes_ = max_label + 1;
  }
  g.labels_ = std::move(labels);
  g.features_ = std::make_shared<const Matrix>(std::move(features));
  if (stats) *stats = local;
  return g;
}

const std::vector<int>& Graph::labels() const {
  if (!labels_) throw Error("graph has no labels");
  return *labels_;
}

std::vector<Edge> Graph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes_; ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.num_nodes_ == b.num_nodes_ && a.offsets_ == b.offsets_ &&
         a.neighbors_ == b.neighbors_ && a.labels_ == b.labels_ &&
         a.features_->rows() == b.features_->rows() &&
         a.features_->cols() == b.features_->cols() && *a.features_ == *b.features_;
}

Vector degree_vector(const Graph& g) {
  Vector d(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) d[v] = static_cast<double>(g.degree(v));
  return d;
}

std::vector<NodeId> k_hop_node_set(const Graph& g, NodeId source, int hops,
                                   std::optional<std::size_t> cap) {
  if (source < 0 || source >= g.num_nodes()) {
    throw Error("k_hop_node_set: source " + std::to_string(source) + " out of range");
  }
  if (hops < 1) throw Error("k_hop_node_set: hops must be >= 1");
  const std::size_t limit = cap.value_or(static_cast<std::size_t>(g.num_nodes()));

  std::vector<int> dist(static_cast<std::size_t>(g.num_nodes()), -1);
  std::vector<NodeId> order;
  if (limit == 0) return order;
  order.push_back(source);
  dist[static_cast<std::size_t>(source)] = 0;
  for (std::size_t head = 0; head < order.size() && order.size() < limit; ++head) {
    const NodeId u = order[head];
    const int du = dist[static_cast<std::size_t>(u)];
    if (du == hops) break;
    for (NodeId w : g.neighbors(u)) {
      auto& dw = dist[static_cast<std::size_t>(w)];
      if (dw >= 0) continue;
      dw = du + 1;
      order.push_back(w);
      if (order.size() == limit) break;
    }
  }
  return order;
}

std::vector<int> connected_components(const Graph& g) {
  std::vector<int> comp(static_cast<std::size_t>(g.num_nodes()), -1);
  int next = 0;
  std::deque<NodeId> queue;
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    comp[static_cast<std::size_t>(s)] = next;
    queue.push_back(s);
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop_front();
      for (NodeId w : g.neighbors(u)) {
        if (comp[static_cast<std::size_t>(w)] < 0) {
          comp[static_cast<std::size_t>(w)] = next;
          queue.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

}  // namespace e2neg
