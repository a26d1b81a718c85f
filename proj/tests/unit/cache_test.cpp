#include <gtest/gtest.h>

#include <cstdlib>

#include "e2neg/cache.hpp"
#include "e2neg/error.hpp"
#include "e2neg/io.hpp"
#include "e2neg/sbm.hpp"
#include "support.hpp"

namespace e2neg {
namespace {

using testing::TempDir;

Graph dataset() {
  SbmParams p;
  p.nodes_per_block = 40;
  return generate_sbm(p).graph;
}

TrainConfig config() {
  TrainConfig c;
  c.clusters = 4;
  return c;
}

TEST(Cache, MissThenHitWithSameContent) {
  TempDir dir;
  const Graph g = dataset();
  const CachedPreprocess a = preprocess_cached(g, config(), dir.path());
  EXPECT_FALSE(a.hit);
  const auto bytes = read_file_bytes(a.path);
  const CachedPreprocess b = preprocess_cached(g, config(), dir.path());
  EXPECT_TRUE(b.hit);
  EXPECT_EQ(b.path, a.path);
  EXPECT_EQ(read_file_bytes(b.path), bytes);
  EXPECT_EQ(b.data.spectral.eigenvalues, a.data.spectral.eigenvalues);
  EXPECT_EQ(b.data.spectral.eigenvectors, a.data.spectral.eigenvectors);
  EXPECT_EQ(b.data.clusters.assignments, a.data.clusters.assignments);
  EXPECT_EQ(b.data.clusters.centers, a.data.clusters.centers);
  EXPECT_EQ(b.data.reconstruction.subgraphs, a.data.reconstruction.subgraphs);
  EXPECT_EQ(b.data.reconstruction.features, g.shared_features());
}

TEST(Cache, KeyTracksInputs) {
  const Graph g = dataset();
  const std::uint64_t base = cache_key(g, config());
  TrainConfig c = config();
  c.clusters = 5;
  EXPECT_NE(cache_key(g, c), base);
  c = config();
  c.eig_tol = 1e-9;
  EXPECT_NE(cache_key(g, c), base);
  c = config();
  c.neighbor_cap = 7;
  EXPECT_NE(cache_key(g, c), base);
  c = config();
  c.learning_rate = 0.5;  // training-only settings share the cache
  EXPECT_EQ(cache_key(g, c), base);
  auto edges = g.edge_list();
  edges.pop_back();
  EXPECT_NE(cache_key(Graph::build(edges, g.features()), config()), base);
}

TEST(Cache, CorruptionIsDetected) {
  TempDir dir;
  const Graph g = dataset();
  const CachedPreprocess a = preprocess_cached(g, config(), dir.path());
  auto bytes = read_file_bytes(a.path);
  bytes[40] ^= std::byte{1};
  write_file_bytes(a.path, bytes);
  EXPECT_THROW(preprocess_cached(g, config(), dir.path()), ParseError);
}

TEST(Cache, RandomSamplingRoundTrip) {
  TempDir dir;
  const Graph g = dataset();
  TrainConfig c = config();
  c.variant = Variant::kRandomSampling;
  const CachedPreprocess a = preprocess_cached(g, c, dir.path());
  const CachedPreprocess b = preprocess_cached(g, c, dir.path());
  EXPECT_TRUE(b.hit);
  EXPECT_EQ(b.data.reconstruction.centers(), a.data.reconstruction.centers());
}

TEST(Cache, EnvironmentOverridesDirectory) {
  ::setenv("E2NEG_CACHE_DIR", "/tmp/somewhere", 1);
  EXPECT_EQ(default_cache_dir(), std::filesystem::path("/tmp/somewhere"));
  ::unsetenv("E2NEG_CACHE_DIR");
  EXPECT_EQ(default_cache_dir(), std::filesystem::path(".e2neg-cache"));
}

}  // namespace
}  // namespace e2neg
