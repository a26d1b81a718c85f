#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "e2neg/error.hpp"
#include "e2neg/random.hpp"
#include "e2neg/theory.hpp"

namespace e2neg {
namespace {

TEST(Blocks, ZeroDeltaGivesIdenticalFeaturesPerBlock) {
  const SemanticBlockModel m = synthesize_blocks(3, 5, 2.0, 0.0, 6, 1);
  const Matrix x = m.features();
  for (Eigen::Index i = 0; i < x.rows(); ++i) EXPECT_EQ(x.row(i), m.core.row(m.assignments[i]));
}

TEST(Blocks, SingleBlockDiffsWithinTwoDelta) {
  const SemanticBlockModel m = synthesize_blocks(1, 4, 1.0, 0.3, 40, 2);
  const Matrix x = m.features();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.rows(); ++j) EXPECT_LE((x.row(i) - x.row(j)).norm(), 0.6 + 1e-12);
  }
}

TEST(Blocks, InterDistancesNearSeparation) {
  const SemanticBlockModel m = synthesize_blocks(3, 8, 10.0, 0.1, 20, 3);
  const Matrix x = m.features();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < x.rows(); ++j) {
      if (m.assignments[i] == m.assignments[j]) continue;
      const double d = (x.row(i) - x.row(j)).norm();
      EXPECT_GE(d, 9.8);
      EXPECT_LE(d, 10.2 + 1e-9);
    }
  }
}

TEST(Blocks, InvariantsAcrossShapes) {
  for (int dim : {1, 2, 3, 8}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const SemanticBlockModel m = synthesize_blocks(4, dim, 3.0, 0.7, 10, seed);
      for (Eigen::Index i = 0; i < m.num_nodes(); ++i) EXPECT_LE(m.deviations.row(i).norm(), 0.7);
      for (int p = 0; p < 4; ++p) {
        for (int q = p + 1; q < 4; ++q) EXPECT_GE((m.core.row(p) - m.core.row(q)).norm(), 3.0) << dim;
      }
      const Matrix x = m.features();
      for (Eigen::Index i = 0; i < m.num_nodes(); ++i) {
        EXPECT_EQ(x.row(i), (m.core.row(m.assignments[i]) + m.deviations.row(i)).eval());
      }
    }
  }
}

TEST(Blocks, RejectsNonPositiveSeparation) { EXPECT_THROW(synthesize_blocks(2, 2, 0.0, 0.1, 3, 0), Error); }

TEST(BlockStats, ZeroDelta) {
  const SemanticBlockModel m = synthesize_blocks(3, 4, 5.0, 0.0, 4, 9);
  const BlockDiffStats s = block_diff_stats(m);
  EXPECT_EQ(s.max_intra, 0.0);
  EXPECT_EQ(s.min_inter, s.min_core_distance);
}

TEST(BlockStats, SeparationDominatesDelta) {
  const double sep = 50.0, delta = 0.5;
  const BlockDiffStats s = block_diff_stats(synthesize_blocks(4, 6, sep, delta, 15, 4));
  EXPECT_GT(s.min_inter / s.max_intra, sep / (2 * delta) - 1);
  EXPECT_GE(s.min_inter, s.min_core_distance - 2 * delta);
}

TEST(BlockStats, MatchesBruteForce) {
  const SemanticBlockModel m = synthesize_blocks(3, 3, 1.0, 0.8, 12, 5);
  const Matrix x = m.features();
  double max_intra = 0.0, min_inter = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
      if (i == j) continue;
      const double d = (x.row(i) - x.row(j)).norm();
      if (m.assignments[i] == m.assignments[j]) max_intra = std::max(max_intra, d);
      else min_inter = std::min(min_inter, d);
    }
  }
  const BlockDiffStats s = block_diff_stats(m);
  EXPECT_EQ(s.max_intra, max_intra);
  EXPECT_EQ(s.min_inter, min_inter);
  EXPECT_EQ(s.bound_violations, 0u);
}

TEST(BlockStats, NeedsTwoBlocksOfTwo) {
  EXPECT_THROW(block_diff_stats(synthesize_blocks(1, 2, 1.0, 0.1, 5, 0)), Error);
  EXPECT_THROW(block_diff_stats(synthesize_blocks(2, 2, 1.0, 0.1, 1, 0)), Error);
}

TEST(SimilarityGradient, EqualSimilarities) {
  const std::vector<double> neg(7, 0.3);
  for (double tau : {0.2, 1.0, 3.0}) {
    for (std::size_t j = 0; j < neg.size(); ++j) {
      EXPECT_NEAR(infonce_similarity_gradient(neg, j, 0.3, tau), 1.0 / (tau * 8.0), 1e-15);
    }
  }
}

TEST(SimilarityGradient, ClosedFormSingleNegative) {
  const std::vector<double> neg{0.0};
  EXPECT_NEAR(infonce_similarity_gradient(neg, 0, 1.0, 1.0), 1.0 / (std::exp(1.0) + 1.0), 1e-15);
  EXPECT_NEAR(infonce_similarity_gradient(neg, 0, 1.0, 1.0), 0.2689, 1e-4);
}

// Frozen from a direct Python evaluation.
TEST(SimilarityGradient, FixedVector) {
  const std::vector<double> neg{0.3, -0.2, 0.8, 0.1};
  EXPECT_NEAR(infonce_similarity_gradient(neg, 2, 0.9, 0.5), 0.6731254293507226, 1e-14);
}

TEST(SimilarityGradient, MatchesFiniteDifference) {
  Rng rng(11);
  std::uniform_real_distribution<double> sim(-1.0, 1.0);
  std::uniform_real_distribution<double> temp(0.1, 2.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> neg(2 + t % 9);
    for (double& v : neg) v = sim(rng);
    const double tau = temp(rng);
    const double pos = sim(rng);
    const double h = 1e-6;
    for (std::size_t j = 0; j < neg.size(); ++j) {
      std::vector<double> up = neg, down = neg;
      up[j] += h;
      down[j] -= h;
      const double fd = (infonce_value(up, pos, tau) - infonce_value(down, pos, tau)) / (2 * h);
      EXPECT_NEAR(infonce_similarity_gradient(neg, j, pos, tau), fd, 1e-6);
    }
  }
}

TEST(SimilarityGradient, PositiveIncreasingAndMassBounded) {
  Rng rng(12);
  std::uniform_real_distribution<double> sim(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> neg(1 + t % 12);
    for (double& v : neg) v = sim(rng);
    const double tau = 0.05 + 0.02 * t;
    const double pos = sim(rng);
    double mass = 0.0;
    for (std::size_t j = 0; j < neg.size(); ++j) {
      const double g = infonce_similarity_gradient(neg, j, pos, tau);
      EXPECT_GT(g, 0.0);
      mass += g;
      std::vector<double> bumped = neg;
      bumped[j] = std::min(1.0, neg[j] + 0.05);
      if (bumped[j] > neg[j]) EXPECT_GT(infonce_similarity_gradient(bumped, j, pos, tau), g);
    }
    EXPECT_LE(mass * tau, 1.0 + 1e-12);
  }
}

// Intra similarities all 1; inter similarities drawn at random except the last,
// which is solved so that sum_inter e^{theta/tau} = P e^{1/tau}.
GradientReport balanced_instance(Rng& rng) {
  std::uniform_int_distribution<int> count(1, 20);
  std::uniform_real_distribution<double> sim(-1.0, 1.0);
  std::uniform_real_distribution<double> temp(0.2, 2.0);
  while (true) {
    const int p = count(rng);
    const int m = p + count(rng);
    const double tau = temp(rng);
    std::vector<double> inter(static_cast<std::size_t>(m));
    double rest = 0.0;
    for (int i = 0; i + 1 < m; ++i) {
      inter[i] = sim(rng);
      rest += std::exp(inter[i] / tau);
    }
    const double need = p * std::exp(1.0 / tau) - rest;
    if (need <= 0.0) continue;
    const double last = tau * std::log(need);
    if (last < -1.0 || last > 1.0) continue;
    inter.back() = last;
    const std::vector<double> intra(static_cast<std::size_t>(p), 1.0);
    return gradient_sums(intra, inter, 1.0, tau);
  }
}

TEST(GradientSums, BalancePoint) {
  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    const GradientReport r = balanced_instance(rng);
    EXPECT_LE(std::abs(r.sg_intra - r.sg_inter), 1e-9);
    EXPECT_LE(std::abs(r.threshold_residual), 1e-9 * std::exp(1.0 / r.tau) * r.p);
  }
}

TEST(GradientSums, NoInterNegatives) {
  const std::vector<double> intra(4, 1.0);
  const GradientReport r = gradient_sums(intra, {}, 1.0, 0.5);
  EXPECT_EQ(r.sg_inter, 0.0);
  EXPECT_GT(r.sg_intra, 0.0);
  EXPECT_EQ(r.ratio, 0.0);
}

TEST(GradientSums, ResidualVanishesAtUnitTemperature) {
  const std::vector<double> intra{1.0}, inter{1.0};
  EXPECT_EQ(gradient_sums(intra, inter, 1.0, 1.0).threshold_residual, 0.0);
}

TEST(GradientSums, NoIntraGivesInfiniteRatio) {
  const std::vector<double> inter{0.2, 0.4};
  EXPECT_TRUE(std::isinf(gradient_sums({}, inter, 1.0, 0.5).ratio));
}

TEST(GradientSums, IntraSumGrowsWithPeers) {
  const std::vector<double> inter{0.1, -0.3, 0.5, 0.0};
  double prev = 0.0;
  for (int p = 1; p <= 30; ++p) {
    const std::vector<double> intra(static_cast<std::size_t>(p), 0.9);
    const double sg = gradient_sums(intra, inter, 1.0, 0.5).sg_intra;
    EXPECT_GT(sg, prev);
    prev = sg;
  }
}

TEST(GradientSums, FromEmbeddingsNeedsPeer) {
  const Matrix h = Matrix::Identity(3, 3);
  const std::vector<int> blocks{0, 1, 2};
  EXPECT_THROW(gradient_sums(h, blocks, 0, 0.5), Error);
  const std::vector<int> paired{0, 0, 1};
  const GradientReport r = gradient_sums(h, paired, 0, 0.5);
  EXPECT_EQ(r.p, 1u);
  EXPECT_EQ(r.inter_count, 1u);
}

TEST(Sweep, SeparatedBlocksAreInterDominatedAtSmallCounts) {
  SweepParams p;
  const std::vector<std::size_t> counts{1};
  const std::vector<double> taus{0.5};
  const auto rows = threshold_sweep(p, counts, taus);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_GT(rows[0].report.ratio, 10.0);
}

TEST(Sweep, GridCardinalityAndFiniteness) {
  SweepParams p;
  const std::vector<std::size_t> counts{1, 10, 100};
  const std::vector<double> taus{0.2, 0.5, 1.0};
  const auto rows = threshold_sweep(p, counts, taus);
  ASSERT_EQ(rows.size(), 9u);
  for (const auto& r : rows) {
    EXPECT_TRUE(std::isfinite(r.report.sg_intra));
    EXPECT_TRUE(std::isfinite(r.report.sg_inter));
    EXPECT_TRUE(std::isfinite(r.report.ratio));
    EXPECT_EQ(r.report.p, r.count);
  }
  // Same inter set, more same-block peers: the intra share rises.
  EXPECT_LT(rows[0].report.sg_intra, rows[3].report.sg_intra);
  EXPECT_LT(rows[3].report.sg_intra, rows[6].report.sg_intra);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  const std::string text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 10);
}

}  // namespace
}  // namespace e2neg
