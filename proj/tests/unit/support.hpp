#pragma once

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "e2neg/graph.hpp"
#include "e2neg/random.hpp"
#include "e2neg/types.hpp"

namespace e2neg::testing {

// Erdos-Renyi graph with Gaussian features; reproducible per seed.
inline Graph random_graph(NodeId n, double p, std::uint64_t seed, Eigen::Index features = 4,
                          int classes = 0) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (unit(rng) < p) edges.emplace_back(u, v);
    }
  }
  Matrix x(n, features);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  std::optional<std::vector<int>> labels;
  if (classes > 0) {
    labels.emplace();
    for (NodeId v = 0; v < n; ++v) labels->push_back(v % classes);
  }
  return Graph::build(edges, std::move(x), std::move(labels));
}

inline Graph from_edges(NodeId n, const std::vector<Edge>& edges, Eigen::Index features = 2) {
  return Graph::build(edges, Matrix::Ones(n, features));
}

inline Matrix dense_adjacency(const Graph& g) {
  Matrix a = Matrix::Zero(g.num_nodes(), g.num_nodes());
  for (const auto& [u, v] : g.edge_list()) a(u, v) = a(v, u) = 1.0;
  return a;
}

// L = I - D^{-1/2} A D^{-1/2} built entry by entry.
inline Matrix dense_laplacian(const Graph& g) {
  const Matrix a = dense_adjacency(g);
  const NodeId n = g.num_nodes();
  Matrix l = Matrix::Identity(n, n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      const double di = a.row(i).sum();
      const double dj = a.row(j).sum();
      if (a(i, j) != 0.0) l(i, j) -= 1.0 / std::sqrt(di * dj);
    }
  }
  return l;
}

inline std::vector<std::vector<int>> all_pairs_hops(const Graph& g) {
  const NodeId n = g.num_nodes();
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (NodeId s = 0; s < n; ++s) {
    std::vector<NodeId> frontier{s};
    dist[s][s] = 0;
    for (int d = 1; !frontier.empty(); ++d) {
      std::vector<NodeId> next;
      for (NodeId u : frontier) {
        for (NodeId v : g.neighbors(u)) {
          if (dist[s][v] < 0) {
            dist[s][v] = d;
            next.push_back(v);
          }
        }
      }
      frontier = std::move(next);
    }
  }
  return dist;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("e2neg-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace e2neg::testing
