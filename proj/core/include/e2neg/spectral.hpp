#pragma once

#include <cstdint>
#include <vector>

#include "e2neg/graph.hpp"
#include "e2neg/sparse.hpp"
#include "e2neg/types.hpp"

namespace e2neg {

// The k smallest eigenpairs of a symmetric operator. Column i of
// `eigenvectors` pairs with eigenvalues[i]; values are ascending and the
// columns orthonormal.
struct SpectralBundle {
  Vector eigenvalues;
  Matrix eigenvectors;  // N x k
  Vector residuals;     // ||L u_i - lambda_i u_i||_2 as measured on return

  Eigen::Index k() const noexcept { return eigenvalues.size(); }
  Eigen::Index num_nodes() const noexcept { return eigenvectors.rows(); }
};

enum class EigenMethod {
  kAuto,    // dense when N <= dense_threshold, Krylov otherwise
  kKrylov,  // restarted block Lanczos with full reorthogonalization
  kDense,   // explicit matrix, full symmetric eigendecomposition
};

struct EigenOptions {
  double tol = 1e-8;
  int max_iter = 2000;  // restart cycles for the Krylov path
  std::uint64_t seed = 0;
  EigenMethod method = EigenMethod::kAuto;
  int block_size = 0;  // 0 selects min(k, 8)
  int dense_threshold = 500;
};

SpectralBundle smallest_eigenpairs(const SparseOperator& op, int k, const EigenOptions& opts = {});

struct KMeansResult {
  std::vector<int> assignments;
  Matrix centroids;
  // Within-cluster sum of squares after each centroid update.
  std::vector<double> objective_history;
  int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding. Empty clusters are re-seeded at
// the point farthest from its current centroid. Deterministic per seed.
KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iter = 300);

// K-means over the rows of the eigenvector matrix.
std::vector<int> spectral_kmeans(const SpectralBundle& bundle, int k, std::uint64_t seed,
                                 int max_iter = 300);

enum class Centrality {
  kSpectralNorm,     // ||row v of U_k||
  kRawFeatureNorm,   // ||X_v||
};

struct ClusterModel {
  std::vector<int> assignments;  // cluster id per node
  std::vector<NodeId> centers;   // one node per cluster

  int k() const noexcept { return static_cast<int>(centers.size()); }
  void validate(NodeId num_nodes) const;
};

// Per cluster, the node of maximal centrality; ties go to the lowest node id.
ClusterModel select_centers(const Graph& g, const SpectralBundle& bundle,
                            const std::vector<int>& assignments,
                            Centrality centrality = Centrality::kSpectralNorm);

}  // namespace e2neg
