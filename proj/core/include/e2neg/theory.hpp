#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "e2neg/types.hpp"

namespace e2neg {

// Nodes grouped around k core vectors: x_i = core[block(i)] + deviation_i
// with ||deviation_i|| <= delta.
struct SemanticBlockModel {
  Matrix core;        // k x dim
  Matrix deviations;  // N x dim
  std::vector<int> assignments;
  double delta = 0.0;

  int k() const noexcept { return static_cast<int>(core.rows()); }
  Eigen::Index num_nodes() const noexcept { return deviations.rows(); }
  Matrix features() const;  // core[block(i)] + deviation_i, row by row
};

// Cores sit at pairwise distance >= separation: a scaled orthonormal frame
// under a random rotation when dim >= k, rejection sampling otherwise.
// Deviations are uniform in the delta-ball. Nodes are numbered block by block.
SemanticBlockModel synthesize_blocks(int k, int dim, double separation, double delta, int nodes_per_block,
                                     std::uint64_t seed);
SemanticBlockModel synthesize_blocks(int k, int dim, double separation, double delta,
                                     std::span<const int> block_sizes, std::uint64_t seed);

struct BlockDiffStats {
  double max_intra = 0.0;       // max ||x_i - x_j|| over same-block pairs
  double min_inter = 0.0;       // min ||x_i - x_j|| over cross-block pairs
  double min_core_distance = 0.0;
  // Pairs where ||x_i - x_j|| < ||s_p - s_q|| - ||e_i - e_j||; zero when the
  // triangle-inequality bound holds everywhere.
  std::size_t bound_violations = 0;
};

// Throws Error unless there are >= 2 blocks with >= 2 nodes each.
BlockDiffStats block_diff_stats(const SemanticBlockModel& model);

// d(InfoNCE)/d(theta_target) as a negative: exp(theta_t/tau) / (tau * Z) with
// Z = exp(theta_pos/tau) + sum_k exp(theta_k/tau) over `negatives`.
double infonce_similarity_gradient(std::span<const double> negatives, std::size_t target, double theta_pos,
                                   double tau);

// -log(exp(theta_pos/tau) / Z), the scalar the gradient above differentiates.
double infonce_value(std::span<const double> negatives, double theta_pos, double tau);

struct GradientReport {
  double sg_intra = 0.0;
  double sg_inter = 0.0;
  double ratio = 0.0;  // sg_inter / sg_intra; +inf when sg_intra == 0
  double threshold_residual = 0.0;  // P e^{1/tau} - sum_inter e^{theta/tau}
  std::size_t p = 0;  // same-block negatives
  std::size_t inter_count = 0;
  double tau = 0.0;
};

// Direct summation over the two negative partitions for one anchor, from
// precomputed similarities.
GradientReport gradient_sums(std::span<const double> intra, std::span<const double> inter, double theta_pos,
                             double tau);

// Same, with cosine similarities of `embeddings` rows against `anchor`. The
// positive similarity is taken as 1 (an augmented copy of the anchor).
// Throws Error if the anchor has no same-block peer.
GradientReport gradient_sums(const Matrix& embeddings, std::span<const int> blocks, Eigen::Index anchor,
                             double tau, double theta_pos = 1.0);

struct SweepParams {
  int blocks = 3;
  int dim = 16;
  double separation = 10.0;
  double delta = 0.1;
  int inter_nodes_per_block = 50;  // fixed inter-block negative set
  std::uint64_t seed = 0;
};

struct SweepRow {
  std::size_t count = 0;  // same-block negatives requested
  GradientReport report;
};

// For every (count, tau): a model whose anchor block holds count + 1 nodes
// and whose other blocks hold `inter_nodes_per_block`, then gradient_sums at
// node 0 on the raw features. The model depends on count only, not tau.
std::vector<SweepRow> threshold_sweep(const SweepParams& params, std::span<const std::size_t> counts,
                                      std::span<const double> taus);

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace e2neg
