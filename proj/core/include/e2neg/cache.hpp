#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "e2neg/graph.hpp"
#include "e2neg/train.hpp"

namespace e2neg {

// Preprocessing sidecar, little-endian:
//
//   magic      4 bytes "E2NP"
//   version    u32     1
//   key        u64     cache_key() of the producing run
//   N, k_eig   u64, u64
//   eigenvalues        k_eig float64
//   residuals          k_eig float64
//   eigenvectors       N*k_eig float64, row-major (empty for random-sampling)
//   assignments        u64 count + int32 each
//   centers            u64 count + int32 each
//   stars              u64 count; per star: int32 center, u64 m, m int32 members
//   checksum   u64     FNV-1a of every preceding byte
//
// The key folds in the edge list and every setting that changes the result
// (k, eig_k, tolerance, seed, hops, neighbor cap, centrality, variant).
std::uint64_t cache_key(const Graph& g, const TrainConfig& cfg);

// $E2NEG_CACHE_DIR when set, otherwise ".e2neg-cache" under the working directory.
std::filesystem::path default_cache_dir();
std::filesystem::path cache_file(const std::filesystem::path& dir, std::uint64_t key);

void save_preprocessed(const std::filesystem::path& path, std::uint64_t key, const Preprocessed& pre);

// nullopt when the file does not exist or was written for another key.
// Throws ParseError when the file exists but fails its checksum.
std::optional<Preprocessed> load_preprocessed(const std::filesystem::path& path, std::uint64_t key,
                                              const Graph& g);

struct CachedPreprocess {
  Preprocessed data;
  std::filesystem::path path;
  bool hit = false;
};

// Load from `dir` if a matching sidecar exists, otherwise compute and store.
CachedPreprocess preprocess_cached(const Graph& g, const TrainConfig& cfg, const std::filesystem::path& dir);

}  // namespace e2neg
