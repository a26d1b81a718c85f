#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "e2neg/encoder.hpp"
#include "e2neg/graph.hpp"
#include "e2neg/random.hpp"
#include "e2neg/train.hpp"

namespace e2neg {

enum class EmbedTarget {
  kEncoder,    // H, the GCN output
  kProjector,  // Z, after the two-layer head
};

std::string_view to_string(EmbedTarget t) noexcept;
EmbedTarget parse_embed_target(std::string_view s);

// One GCN pass over the original graph with self-loops and symmetric
// normalization, so every node gets an embedding whether or not a star
// claimed it during training.
Matrix embed_original(const Graph& g, const ParamSet& params, EmbedTarget target = EmbedTarget::kEncoder);

struct ProbeOptions {
  int max_steps = 5000;
  // 0 picks 1/L, where L bounds the curvature of the objective on the data.
  double learning_rate = 0.0;
  double l2 = 1e-4;  // on weights only, not on the bias
  double gradient_tolerance = 1e-6;  // stop once every gradient entry is below this
  int max_split_retries = 100;
};

struct ProbeResult {
  std::vector<double> accuracies;  // one per seed
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation over seeds
};

// Multinomial logistic regression by full-batch gradient descent on a
// stratified train split, scored on the remainder. Embeddings are divided by
// their root-mean-square row norm first; the scale is global, so rotating all
// rows leaves the result unchanged.
ProbeResult linear_probe(const Matrix& h, std::span<const int> labels, double train_fraction,
                         std::span<const std::uint64_t> seeds, const ProbeOptions& opts = {});

struct Split {
  std::vector<NodeId> train;
  std::vector<NodeId> test;
};

// Fits on split.train and returns accuracy on split.test. `h` is used as is.
double probe_split(const Matrix& h, std::span<const int> labels, const Split& split,
                   const ProbeOptions& opts = {});

// Per class, a shuffled prefix of train_fraction * size members goes to train,
// the fractional part rounded at random. Redrawn while
// some class has no train node; throws Error after `max_retries` attempts.
Split stratified_split(std::span<const int> labels, double train_fraction, Rng& rng, int max_retries = 100);

struct BenchRecord {
  std::string variant;
  NodeId num_nodes = 0;
  std::vector<double> epoch_seconds;  // measured epochs only
  double median_epoch_seconds = 0.0;
  std::int64_t peak_rss_bytes = 0;
  std::uint64_t similarity_terms = 0;  // per epoch, loss stage
};

// Runs `warmup` untimed epochs and then `measured` timed ones on a fresh
// Trainer. Throws Error for measured < 1.
BenchRecord bench_epoch(const Graph& g, const TrainConfig& cfg, int warmup, int measured);
BenchRecord bench_epoch(const Graph& g, const TrainConfig& cfg, const Preprocessed& pre, int warmup,
                        int measured);

void write_bench_csv_header(std::ostream& out);
void write_bench_csv_row(std::ostream& out, const BenchRecord& r);

}  // namespace e2neg
