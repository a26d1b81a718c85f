#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "e2neg/encoder.hpp"
#include "e2neg/graph.hpp"
#include "e2neg/loss.hpp"
#include "e2neg/spectral.hpp"
#include "e2neg/topology.hpp"

namespace e2neg {

enum class Variant {
  kE2Neg,           // spectral centers, center-swap views, centers-only loss
  kRandomSampling,  // k uniformly random nodes replace the spectral centers
  kFullSampling,    // loss over every node of the two views
  kNoAug,           // second view identical to the first
};

std::string_view to_string(Variant v) noexcept;
std::string_view to_string(Centrality c) noexcept;
std::string_view to_string(NegativeMode m) noexcept;
Variant parse_variant(std::string_view s);
Centrality parse_centrality(std::string_view s);
NegativeMode parse_negative_mode(std::string_view s);

struct TrainConfig {
  double learning_rate = 0.001;
  double weight_decay = 1e-5;
  int hidden_dim = 256;
  int epochs = 200;
  int clusters = 10;
  int neighbor_cap = 100;
  int hops = 2;
  double temperature = 0.5;
  std::uint64_t seed = 0;
  Variant variant = Variant::kE2Neg;

  int eig_k = 0;  // eigenvectors used for clustering; 0 means `clusters`
  double eig_tol = 1e-8;
  int eig_max_iter = 2000;
  int kmeans_max_iter = 300;
  Centrality centrality = Centrality::kSpectralNorm;
  NegativeMode negatives = NegativeMode::kCrossAndIntra;

  int effective_eig_k() const noexcept { return eig_k > 0 ? eig_k : clusters; }
  // Throws Error on a non-positive count, learning rate or temperature.
  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Output of the one-off preprocessing stage. For the random-sampling variant
// `spectral` is empty and `clusters` carries only the sampled centers.
struct Preprocessed {
  SpectralBundle spectral;
  ClusterModel clusters;
  ReconstructedGraph reconstruction;
};

Preprocessed preprocess(const Graph& g, const TrainConfig& cfg);

// The pair of propagation operators and the paired anchor rows for one epoch.
struct TrainingViews {
  SparseOperator op_a;
  SparseOperator op_b;
  std::vector<NodeId> rows_a;
  std::vector<NodeId> rows_b;
};

// `permutation` maps star i of the second view to original center number
// permutation[i]. The full-sampling variant anchors every node; its partner in
// the second view is itself, except for centers, which follow their star.
TrainingViews make_views(const ReconstructedGraph& r, const std::vector<int>& permutation, Variant variant);

// Loss of one epoch's views and, when `grads` is non-null, its gradient with
// respect to every parameter (accumulated into *grads).
LossResult compute_loss(const TrainingViews& views, const Matrix& x, const ParamSet& p, double tau,
                        NegativeMode mode, ParamSet* grads);

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;
  double wall_ms = 0.0;
  std::int64_t rss_bytes = 0;
  std::uint64_t similarity_terms = 0;
};

class Trainer {
 public:
  Trainer(const Graph& g, const TrainConfig& cfg, ReconstructedGraph reconstruction);
  Trainer(const Graph& g, const TrainConfig& cfg, ReconstructedGraph reconstruction, EncoderParams initial);

  // Draws this epoch's augmentation, evaluates the loss, and applies one
  // Adam update. Throws TrainingError on a non-finite loss.
  EpochRecord run_epoch();

  const EncoderParams& params() const noexcept { return params_; }
  int epoch() const noexcept { return epoch_; }
  const ReconstructedGraph& reconstruction() const noexcept { return recon_; }

 private:
  std::vector<int> draw_permutation() const;

  const Graph& graph_;
  TrainConfig cfg_;
  ReconstructedGraph recon_;
  EncoderParams params_;
  int epoch_ = 0;
};

struct TrainResult {
  EncoderParams params;
  std::vector<EpochRecord> log;
};

TrainResult train(const Graph& g, const TrainConfig& cfg);
TrainResult train(const Graph& g, const TrainConfig& cfg, const Preprocessed& pre);

}  // namespace e2neg
