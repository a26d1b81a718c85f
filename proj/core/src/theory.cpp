#include "e2neg/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <string>

#include <Eigen/QR>

#include "e2neg/error.hpp"
#include "e2neg/random.hpp"

namespace e2neg {

Matrix SemanticBlockModel::features() const {
  Matrix x(deviations.rows(), deviations.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    x.row(i) = core.row(assignments[static_cast<std::size_t>(i)]) + deviations.row(i);
  }
  return x;
}

namespace {

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

double min_pairwise_distance(const Matrix& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < pts.rows(); ++j) best = std::min(best, (pts.row(i) - pts.row(j)).norm());
  }
  return best;
}

Matrix make_cores(int k, int dim, double separation, Rng& rng) {
  Matrix core;
  if (dim >= k) {
    // Orthonormal frame rows scaled so every pair is separation apart.
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian(dim, dim, rng)).householderQ();
    core = q.leftCols(k).transpose() * (separation / std::sqrt(2.0));
  } else {
    double scale = separation * std::max(1.0, std::sqrt(static_cast<double>(k)));
    for (int attempt = 0;; ++attempt) {
      core = gaussian(k, dim, rng) * scale;
      if (k < 2 || min_pairwise_distance(core) >= separation) break;
      if (attempt % 100 == 99) scale *= 1.5;
    }
  }
  // Rounding in the frame can land a hair under the target distance.
  if (k >= 2) {
    const double d = min_pairwise_distance(core);
    if (d < separation) core *= std::nextafter(separation / d, std::numeric_limits<double>::infinity());
  }
  return core;
}

}  // namespace

SemanticBlockModel synthesize_blocks(int k, int dim, double separation, double delta,
                                     std::span<const int> block_sizes, std::uint64_t seed) {
  if (k < 1 || dim < 1) throw Error("semantic blocks need k >= 1 and dim >= 1");
  if (!(separation > 0.0)) throw Error("block separation must be positive");
  if (delta < 0.0) throw Error("deviation bound must be non-negative");
  if (block_sizes.size() != static_cast<std::size_t>(k)) throw Error("one block size per block is required");

  Rng rng = make_rng(seed, Stage::kSynthetic);
  SemanticBlockModel m;
  m.delta = delta;
  m.core = make_cores(k, dim, separation, rng);
  Eigen::Index n = 0;
  for (int s : block_sizes) {
    if (s < 0) throw Error("block sizes cannot be negative");
    n += s;
  }
  m.deviations = Matrix::Zero(n, dim);
  m.assignments.reserve(static_cast<std::size_t>(n));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::Index row = 0;
  for (int b = 0; b < k; ++b) {
    for (int i = 0; i < block_sizes[static_cast<std::size_t>(b)]; ++i, ++row) {
      m.assignments.push_back(b);
      if (delta == 0.0) continue;
      RowVector dir = gaussian(1, dim, rng);
      const double norm = dir.norm();
      if (norm == 0.0) continue;
      const double radius = delta * std::pow(unit(rng), 1.0 / dim);
      m.deviations.row(row) = dir * (std::min(radius, delta) / norm);
      // Keep the bound exact after rounding.
      const double got = m.deviations.row(row).norm();
      if (got > delta) m.deviations.row(row) *= delta / got * (1.0 - 1e-15);
    }
  }
  return m;
}

SemanticBlockModel synthesize_blocks(int k, int dim, double separation, double delta, int nodes_per_block,
                                     std::uint64_t seed) {
  const std::vector<int> sizes(static_cast<std::size_t>(std::max(k, 0)), nodes_per_block);
  return synthesize_blocks(k, dim, separation, delta, sizes, seed);
}

BlockDiffStats block_diff_stats(const SemanticBlockModel& model) {
  std::vector<int> counts(static_cast<std::size_t>(model.k()), 0);
  for (int b : model.assignments) ++counts[static_cast<std::size_t>(b)];
  if (model.k() < 2 || std::any_of(counts.begin(), counts.end(), [](int c) { return c < 2; })) {
    throw Error("block statistics need at least 2 blocks of at least 2 nodes");
  }
  const Matrix x = model.features();
  BlockDiffStats s;
  s.min_inter = std::numeric_limits<double>::infinity();
  s.min_core_distance = min_pairwise_distance(model.core);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int bi = model.assignments[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < x.rows(); ++j) {
      const int bj = model.assignments[static_cast<std::size_t>(j)];
      const double diff = (x.row(i) - x.row(j)).norm();
      if (bi == bj) {
        s.max_intra = std::max(s.max_intra, diff);
        continue;
      }
      s.min_inter = std::min(s.min_inter, diff);
      const double bound =
          (model.core.row(bi) - model.core.row(bj)).norm() - (model.deviations.row(i) - model.deviations.row(j)).norm();
      if (diff < bound) ++s.bound_violations;
    }
  }
  return s;
}

double infonce_similarity_gradient(std::span<const double> negatives, std::size_t target, double theta_pos,
                                   double tau) {
  if (!(tau > 0.0)) throw Error("temperature must be positive");
  if (target >= negatives.size()) throw Error("target similarity index out of range");
  double mx = theta_pos;
  for (double t : negatives) mx = std::max(mx, t);
  double z = std::exp((theta_pos - mx) / tau);
  for (double t : negatives) z += std::exp((t - mx) / tau);
  return std::exp((negatives[target] - mx) / tau) / (tau * z);
}

double infonce_value(std::span<const double> negatives, double theta_pos, double tau) {
  if (!(tau > 0.0)) throw Error("temperature must be positive");
  double mx = theta_pos;
  for (double t : negatives) mx = std::max(mx, t);
  double z = std::exp((theta_pos - mx) / tau);
  for (double t : negatives) z += std::exp((t - mx) / tau);
  return -((theta_pos - mx) / tau - std::log(z));
}

GradientReport gradient_sums(std::span<const double> intra, std::span<const double> inter, double theta_pos,
                             double tau) {
  if (!(tau > 0.0)) throw Error("temperature must be positive");
  double mx = theta_pos;
  for (double t : intra) mx = std::max(mx, t);
  for (double t : inter) mx = std::max(mx, t);
  double e_intra = 0.0;
  double e_inter = 0.0;
  for (double t : intra) e_intra += std::exp((t - mx) / tau);
  for (double t : inter) e_inter += std::exp((t - mx) / tau);
  const double z = std::exp((theta_pos - mx) / tau) + e_intra + e_inter;

  GradientReport r;
  r.tau = tau;
  r.p = intra.size();
  r.inter_count = inter.size();
  r.sg_intra = e_intra / (tau * z);
  r.sg_inter = e_inter / (tau * z);
  r.ratio = r.sg_intra > 0.0 ? r.sg_inter / r.sg_intra : std::numeric_limits<double>::infinity();
  double raw_inter = 0.0;
  for (double t : inter) raw_inter += std::exp(t / tau);
  r.threshold_residual = static_cast<double>(r.p) * std::exp(1.0 / tau) - raw_inter;
  return r;
}

GradientReport gradient_sums(const Matrix& embeddings, std::span<const int> blocks, Eigen::Index anchor,
                             double tau, double theta_pos) {
  if (static_cast<std::size_t>(embeddings.rows()) != blocks.size()) {
    throw Error("one block label per embedding row is required");
  }
  if (anchor < 0 || anchor >= embeddings.rows()) throw Error("anchor out of range");
  const double anchor_norm = embeddings.row(anchor).norm();
  if (anchor_norm == 0.0) throw Error("anchor embedding has zero norm");
  std::vector<double> intra;
  std::vector<double> inter;
  const int own = blocks[static_cast<std::size_t>(anchor)];
  for (Eigen::Index j = 0; j < embeddings.rows(); ++j) {
    if (j == anchor) continue;
    const double nj = embeddings.row(j).norm();
    if (nj == 0.0) throw Error("embedding row " + std::to_string(j) + " has zero norm");
    const double cos = embeddings.row(anchor).dot(embeddings.row(j)) / (anchor_norm * nj);
    (blocks[static_cast<std::size_t>(j)] == own ? intra : inter).push_back(std::clamp(cos, -1.0, 1.0));
  }
  if (intra.empty()) throw Error("anchor has no same-block negative");
  return gradient_sums(intra, inter, theta_pos, tau);
}

std::vector<SweepRow> threshold_sweep(const SweepParams& params, std::span<const std::size_t> counts,
                                      std::span<const double> taus) {
  if (params.blocks < 2) throw Error("sweep needs at least 2 blocks");
  std::vector<SweepRow> rows;
  for (const std::size_t count : counts) {
    if (count < 1) throw Error("sweep counts must be >= 1");
    std::vector<int> sizes(static_cast<std::size_t>(params.blocks), params.inter_nodes_per_block);
    sizes[0] = static_cast<int>(count) + 1;
    const SemanticBlockModel model =
        synthesize_blocks(params.blocks, params.dim, params.separation, params.delta, sizes, params.seed);
    const Matrix x = model.features();
    for (const double tau : taus) rows.push_back({count, gradient_sums(x, model.assignments, 0, tau)});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "count,tau,p,inter_count,sg_intra,sg_inter,ratio,threshold_residual\n";
  const auto old = out.precision(17);
  for (const auto& r : rows) {
    out << r.count << ',' << r.report.tau << ',' << r.report.p << ',' << r.report.inter_count << ','
        << r.report.sg_intra << ',' << r.report.sg_inter << ',' << r.report.ratio << ','
        << r.report.threshold_residual << '\n';
  }
  out.precision(old);
}

}  // namespace e2neg
