#include "e2neg/train.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "e2neg/adam.hpp"
#include "e2neg/error.hpp"
#include "e2neg/process.hpp"
#include "e2neg/random.hpp"

namespace e2neg {

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::kE2Neg: return "e2neg";
    case Variant::kRandomSampling: return "random-sampling";
    case Variant::kFullSampling: return "full-sampling";
    case Variant::kNoAug: return "no-aug";
  }
  return "?";
}

std::string_view to_string(Centrality c) noexcept {
  return c == Centrality::kSpectralNorm ? "spectral-norm" : "raw-feature-norm";
}

std::string_view to_string(NegativeMode m) noexcept {
  return m == NegativeMode::kCrossAndIntra ? "cross-and-intra" : "cross-only";
}

Variant parse_variant(std::string_view s) {
  for (Variant v : {Variant::kE2Neg, Variant::kRandomSampling, Variant::kFullSampling, Variant::kNoAug}) {
    if (s == to_string(v)) return v;
  }
  throw Error("unknown variant '" + std::string(s) + "' (e2neg, random-sampling, full-sampling, no-aug)");
}

Centrality parse_centrality(std::string_view s) {
  if (s == "spectral-norm") return Centrality::kSpectralNorm;
  if (s == "raw-feature-norm") return Centrality::kRawFeatureNorm;
  throw Error("unknown centrality '" + std::string(s) + "' (spectral-norm, raw-feature-norm)");
}

NegativeMode parse_negative_mode(std::string_view s) {
  if (s == "cross-and-intra") return NegativeMode::kCrossAndIntra;
  if (s == "cross-only") return NegativeMode::kCrossOnly;
  throw Error("unknown negatives mode '" + std::string(s) + "' (cross-and-intra, cross-only)");
}

void TrainConfig::validate() const {
  auto positive = [](const char* name, double v) {
    if (!(v > 0.0)) throw Error(std::string(name) + " must be positive");
  };
  positive("learning_rate", learning_rate);
  positive("temperature", temperature);
  positive("eig_tol", eig_tol);
  if (!(weight_decay >= 0.0)) throw Error("weight_decay must be non-negative");
  if (hidden_dim < 1 || clusters < 1 || neighbor_cap < 1 || hops < 1 || eig_max_iter < 1 ||
      kmeans_max_iter < 1 || eig_k < 0 || epochs < 0) {
    throw Error("counts in the training configuration must be >= 1");
  }
}

Preprocessed preprocess(const Graph& g, const TrainConfig& cfg) {
  cfg.validate();
  const int n = g.num_nodes();
  if (cfg.clusters > n) {
    throw Error("clusters = " + std::to_string(cfg.clusters) + " exceeds the node count " + std::to_string(n));
  }
  if (cfg.effective_eig_k() > n) {
    throw Error("eig_k = " + std::to_string(cfg.effective_eig_k()) + " exceeds the node count " +
                std::to_string(n));
  }

  Preprocessed out;
  if (cfg.variant == Variant::kRandomSampling) {
    Rng rng = make_rng(cfg.seed, Stage::kSampling);
    std::vector<NodeId> nodes(static_cast<std::size_t>(n));
    std::iota(nodes.begin(), nodes.end(), 0);
    for (int i = 0; i < cfg.clusters; ++i) {
      std::uniform_int_distribution<int> pick(i, n - 1);
      std::swap(nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(pick(rng))]);
    }
    out.clusters.centers.assign(nodes.begin(), nodes.begin() + cfg.clusters);
    out.reconstruction = reconstruct(g, std::span<const NodeId>(out.clusters.centers), cfg.hops,
                                     static_cast<std::size_t>(cfg.neighbor_cap));
    return out;
  }

  EigenOptions eo;
  eo.tol = cfg.eig_tol;
  eo.max_iter = cfg.eig_max_iter;
  eo.seed = derive_seed(cfg.seed, Stage::kPreprocess, 1);
  out.spectral = smallest_eigenpairs(normalized_laplacian(g), cfg.effective_eig_k(), eo);
  const auto assignments = spectral_kmeans(out.spectral, cfg.clusters, derive_seed(cfg.seed, Stage::kPreprocess, 2),
                                           cfg.kmeans_max_iter);
  out.clusters = select_centers(g, out.spectral, assignments, cfg.centrality);
  out.clusters.validate(n);
  out.reconstruction = reconstruct(g, out.clusters, cfg.hops, static_cast<std::size_t>(cfg.neighbor_cap));
  return out;
}

TrainingViews make_views(const ReconstructedGraph& r, const std::vector<int>& permutation, Variant variant) {
  TrainingViews v;
  const AugmentedGraph aug = apply_center_permutation(r, permutation);
  v.op_a = to_propagation_operator(r);
  v.op_b = to_propagation_operator(aug);
  if (variant == Variant::kFullSampling) {
    v.rows_a.resize(static_cast<std::size_t>(r.num_nodes));
    std::iota(v.rows_a.begin(), v.rows_a.end(), 0);
    v.rows_b = v.rows_a;
    for (std::size_t i = 0; i < r.subgraphs.size(); ++i) {
      v.rows_b[static_cast<std::size_t>(r.subgraphs[i].center)] = aug.view.subgraphs[i].center;
    }
  } else {
    v.rows_a = r.centers();
    v.rows_b = aug.view.centers();
  }
  return v;
}

LossResult compute_loss(const TrainingViews& views, const Matrix& x, const ParamSet& p, double tau,
                        NegativeMode mode, ParamSet* grads) {
  const ForwardCache ca = forward(views.op_a, x, p, views.rows_a);
  const ForwardCache cb = forward(views.op_b, x, p, views.rows_b);
  LossResult r = infonce_loss(ca.z, cb.z, tau, mode, grads != nullptr);
  if (grads) {
    backward(ca, r.grad_a, p, *grads);
    backward(cb, r.grad_b, p, *grads);
  }
  return r;
}

Trainer::Trainer(const Graph& g, const TrainConfig& cfg, ReconstructedGraph reconstruction)
    : Trainer(g, cfg, std::move(reconstruction),
              init_params(g.num_features(), cfg.hidden_dim, cfg.seed)) {}

Trainer::Trainer(const Graph& g, const TrainConfig& cfg, ReconstructedGraph reconstruction, EncoderParams initial)
    : graph_(g), cfg_(cfg), recon_(std::move(reconstruction)), params_(std::move(initial)) {
  cfg_.validate();
  recon_.validate();
  if (recon_.k() < 2) throw Error("training needs at least 2 centers, got " + std::to_string(recon_.k()));
  if (params_.weights.input_dim() != g.num_features()) {
    throw Error("encoder input width does not match the feature width");
  }
}

std::vector<int> Trainer::draw_permutation() const {
  if (cfg_.variant == Variant::kNoAug) {
    std::vector<int> id(static_cast<std::size_t>(recon_.k()));
    std::iota(id.begin(), id.end(), 0);
    return id;
  }
  Rng rng = make_rng(cfg_.seed, Stage::kAugment, static_cast<std::uint64_t>(epoch_));
  return random_derangement(recon_.k(), rng);
}

EpochRecord Trainer::run_epoch() {
  const auto start = std::chrono::steady_clock::now();
  const TrainingViews views = make_views(recon_, draw_permutation(), cfg_.variant);
  ParamSet grads = ParamSet::zeros_like(params_.weights);
  LossResult r;
  try {
    r = compute_loss(views, graph_.features(), params_.weights, cfg_.temperature, cfg_.negatives, &grads);
    if (!std::isfinite(r.loss)) throw TrainingError("non-finite loss");
    adam_step(params_, grads, cfg_.learning_rate, cfg_.weight_decay);
  } catch (const TrainingError& e) {
    throw TrainingError("epoch " + std::to_string(epoch_) + ": " + e.what());
  }
  const auto stop = std::chrono::steady_clock::now();

  EpochRecord rec;
  rec.epoch = epoch_;
  rec.loss = r.loss;
  rec.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  rec.rss_bytes = current_rss_bytes();
  rec.similarity_terms = r.similarity_terms;
  ++epoch_;
  return rec;
}

TrainResult train(const Graph& g, const TrainConfig& cfg, const Preprocessed& pre) {
  cfg.validate();
  if (cfg.epochs == 0) {
    return {init_params(g.num_features(), cfg.hidden_dim, cfg.seed), {}};
  }
  Trainer t(g, cfg, pre.reconstruction);
  TrainResult out;
  out.log.reserve(static_cast<std::size_t>(cfg.epochs));
  for (int e = 0; e < cfg.epochs; ++e) out.log.push_back(t.run_epoch());
  out.params = t.params();
  return out;
}

TrainResult train(const Graph& g, const TrainConfig& cfg) {
  cfg.validate();
  if (cfg.epochs == 0) return {init_params(g.num_features(), cfg.hidden_dim, cfg.seed), {}};
  return train(g, cfg, preprocess(g, cfg));
}

}  // namespace e2neg
