#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "e2neg/sbm.hpp"
#include "e2neg/theory.hpp"
#include "e2neg_cli/config.hpp"

namespace e2neg::cli {

namespace fs = std::filesystem;

struct PreprocessOptions {
  RunConfig config;
  fs::path cache_dir;
};

struct PreprocessSummary {
  fs::path cache_path;
  bool hit = false;
  int centers = 0;
  std::size_t covered_nodes = 0;
};

PreprocessSummary cmd_preprocess(const PreprocessOptions& opts, std::ostream& out);

struct TrainOptions {
  RunConfig config;
  fs::path out_dir;
  fs::path cache_dir;
};

// Writes checkpoint.e2nc, train_log.csv, config.txt and manifest.json into
// out_dir; returns the manifest path.
fs::path cmd_train(const TrainOptions& opts, std::ostream& out);

struct EmbedOptions {
  RunConfig config;  // dataset paths and probe_on
  fs::path checkpoint;
  fs::path out;
  std::optional<fs::path> manifest;
};

void cmd_embed(const EmbedOptions& opts, std::ostream& out);

struct ProbeRunOptions {
  fs::path embeddings;
  fs::path labels;
  double train_fraction = 0.1;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::string variant = "e2neg";
  std::string dataset = "unnamed";
  // Filled from the manifest's training metrics when one is given.
  std::optional<fs::path> manifest;
  fs::path out;
  bool append = false;
};

// Results CSV: variant,dataset,seed,accuracy,epoch_time_ms,peak_rss
double cmd_probe(const ProbeRunOptions& opts, std::ostream& out);

struct BenchOptions {
  RunConfig config;
  std::vector<std::string> variants{"e2neg", "full-sampling"};
  int warmup = 1;
  int measured = 5;
  fs::path out;
  std::optional<fs::path> manifest;
};

void cmd_bench(const BenchOptions& opts, std::ostream& out);

struct TheoryOptions {
  SweepParams params;
  std::vector<std::size_t> counts{1, 10, 100};
  std::vector<double> taus{0.2, 0.5, 1.0};
  fs::path out;
  std::optional<fs::path> manifest;
};

std::size_t cmd_theory(const TheoryOptions& opts, std::ostream& out);

struct SbmOptions {
  SbmParams params;
  fs::path out_dir;
  bool binary_features = false;
};

// Writes edges.txt, features.csv (or features.bin), labels.txt and a
// dataset.conf pointing at them.
void cmd_sbm(const SbmOptions& opts, std::ostream& out);

// Full command line. Returns the process exit code; errors go to `err`.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace e2neg::cli
