#include "e2neg/spectral.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "e2neg/error.hpp"
#include "e2neg/random.hpp"

namespace e2neg {

namespace {

double squared_distance(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

Matrix seed_centroids(const Matrix& points, int k, Rng& rng) {
  const Eigen::Index n = points.rows();
  Matrix centroids(k, points.cols());
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  Eigen::Index first = pick(rng);
  centroids.row(0) = points.row(first);
  chosen[static_cast<std::size_t>(first)] = 1;

  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = squared_distance(points, i, centroids, 0);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    Eigen::Index next = -1;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[static_cast<std::size_t>(i)];
        if (acc >= target && d2[static_cast<std::size_t>(i)] > 0.0) {
          next = i;
          break;
        }
      }
      if (next < 0) {
        for (Eigen::Index i = n - 1; i >= 0; --i) {
          if (d2[static_cast<std::size_t>(i)] > 0.0) {
            next = i;
            break;
          }
        }
      }
    } else {
      // Every remaining point coincides with a chosen centroid.
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!chosen[static_cast<std::size_t>(i)]) {
          next = i;
          break;
        }
      }
    }
    chosen[static_cast<std::size_t>(next)] = 1;
    centroids.row(c) = points.row(next);
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[static_cast<std::size_t>(i)] = std::min(d2[static_cast<std::size_t>(i)], squared_distance(points, i, centroids, c));
    }
  }
  return centroids;
}

// Returns true if any assignment changed.
bool assign(const Matrix& points, const Matrix& centroids, std::vector<int>& labels) {
  bool changed = false;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double d = squared_distance(points, i, centroids, c);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    if (labels[static_cast<std::size_t>(i)] != best) {
      labels[static_cast<std::size_t>(i)] = best;
      changed = true;
    }
  }
  return changed;
}

// Moves the farthest point of a multi-member cluster into each empty cluster.
bool repair_empty(const Matrix& points, Matrix& centroids, std::vector<int>& labels) {
  const int k = static_cast<int>(centroids.rows());
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
  bool repaired = false;
  for (int c = 0; c < k; ++c) {
    if (sizes[static_cast<std::size_t>(c)] > 0) continue;
    Eigen::Index far = -1;
    double far_d = -1.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      const int l = labels[static_cast<std::size_t>(i)];
      if (sizes[static_cast<std::size_t>(l)] < 2) continue;
      const double d = squared_distance(points, i, centroids, l);
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (far < 0) throw Error("k-means: cannot repair empty cluster " + std::to_string(c));
    --sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
    labels[static_cast<std::size_t>(far)] = c;
    sizes[static_cast<std::size_t>(c)] = 1;
    centroids.row(c) = points.row(far);
    repaired = true;
  }
  return repaired;
}

void update_centroids(const Matrix& points, const std::vector<int>& labels, Matrix& centroids) {
  const auto k = centroids.rows();
  Matrix sums = Matrix::Zero(k, points.cols());
  std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    sums.row(l) += points.row(i);
    counts[static_cast<std::size_t>(l)] += 1.0;
  }
  for (Eigen::Index c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0.0) centroids.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
  }
}

double objective(const Matrix& points, const std::vector<int>& labels, const Matrix& centroids) {
  double j = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    j += squared_distance(points, i, centroids, labels[static_cast<std::size_t>(i)]);
  }
  return j;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iter) {
  if (k < 1) throw Error("k-means: k must be >= 1");
  if (points.rows() < k) {
    throw Error("k-means: " + std::to_string(points.rows()) + " points cannot form " + std::to_string(k) +
                " non-empty clusters");
  }
  Rng rng = make_rng(seed, Stage::kPreprocess, 0x6b6d);
  KMeansResult r;
  r.centroids = seed_centroids(points, k, rng);
  r.assignments.assign(static_cast<std::size_t>(points.rows()), -1);

  for (int it = 0; it < std::max(1, max_iter); ++it) {
    bool changed = assign(points, r.centroids, r.assignments);
    changed |= repair_empty(points, r.centroids, r.assignments);
    update_centroids(points, r.assignments, r.centroids);
    r.objective_history.push_back(objective(points, r.assignments, r.centroids));
    r.iterations = it + 1;
    if (!changed) break;
  }
  return r;
}

std::vector<int> spectral_kmeans(const SpectralBundle& bundle, int k, std::uint64_t seed, int max_iter) {
  return kmeans(bundle.eigenvectors, k, seed, max_iter).assignments;
}

void ClusterModel::validate(NodeId num_nodes) const {
  if (assignments.size() != static_cast<std::size_t>(num_nodes)) {
    throw Error("cluster model covers " + std::to_string(assignments.size()) + " nodes, graph has " +
                std::to_string(num_nodes));
  }
  std::vector<int> sizes(centers.size(), 0);
  for (int a : assignments) {
    if (a < 0 || a >= k()) throw Error("cluster assignment out of range");
    ++sizes[static_cast<std::size_t>(a)];
  }
  for (std::size_t c = 0; c < centers.size(); ++c) {
    if (sizes[c] == 0) throw Error("cluster " + std::to_string(c) + " is empty");
    const NodeId v = centers[c];
    if (v < 0 || v >= num_nodes || assignments[static_cast<std::size_t>(v)] != static_cast<int>(c)) {
      throw Error("center of cluster " + std::to_string(c) + " does not belong to it");
    }
  }
}

ClusterModel select_centers(const Graph& g, const SpectralBundle& bundle,
                            const std::vector<int>& assignments, Centrality centrality) {
  const NodeId n = g.num_nodes();
  if (assignments.size() != static_cast<std::size_t>(n)) {
    throw Error("select_centers: assignment vector length does not match graph");
  }
  const Matrix& source = centrality == Centrality::kSpectralNorm ? bundle.eigenvectors : g.features();
  if (source.rows() != n) throw Error("select_centers: centrality source has wrong row count");

  int k = 0;
  for (int a : assignments) {
    if (a < 0) throw Error("select_centers: negative cluster id");
    k = std::max(k, a + 1);
  }
  ClusterModel m;
  m.assignments = assignments;
  m.centers.assign(static_cast<std::size_t>(k), -1);
  std::vector<double> best(static_cast<std::size_t>(k), -1.0);
  for (NodeId v = 0; v < n; ++v) {
    const auto c = static_cast<std::size_t>(assignments[static_cast<std::size_t>(v)]);
    const double norm = source.row(v).norm();
    if (norm > best[c]) {
      best[c] = norm;
      m.centers[c] = v;
    }
  }
  for (int c = 0; c < k; ++c) {
    if (m.centers[static_cast<std::size_t>(c)] < 0) throw Error("select_centers: cluster " + std::to_string(c) + " is empty");
  }
  return m;
}

}  // namespace e2neg
