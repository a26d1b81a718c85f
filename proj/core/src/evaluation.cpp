#include "e2neg/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>

#include "e2neg/error.hpp"
#include "e2neg/process.hpp"
#include "e2neg/sparse.hpp"

namespace e2neg {

std::string_view to_string(EmbedTarget t) noexcept {
  return t == EmbedTarget::kEncoder ? "encoder" : "projector";
}

EmbedTarget parse_embed_target(std::string_view s) {
  if (s == "encoder") return EmbedTarget::kEncoder;
  if (s == "projector") return EmbedTarget::kProjector;
  throw Error("unknown embedding target '" + std::string(s) + "' (expected encoder or projector)");
}

Matrix embed_original(const Graph& g, const ParamSet& params, EmbedTarget target) {
  if (params.input_dim() != g.num_features()) {
    throw Error("encoder expects " + std::to_string(params.input_dim()) + " features, graph has " +
                std::to_string(g.num_features()));
  }
  Matrix h = gcn_forward(gcn_normalized_adjacency(g), g.features(), params);
  if (target == EmbedTarget::kProjector) return project(h, params);
  return h;
}

Split stratified_split(std::span<const int> labels, double train_fraction, Rng& rng, int max_retries) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw Error("train fraction must lie in (0, 1)");
  if (labels.empty()) throw Error("cannot split an empty label set");
  const int classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<NodeId>> by_class(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw Error("negative label at node " + std::to_string(i));
    by_class[static_cast<std::size_t>(labels[i])].push_back(static_cast<NodeId>(i));
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Split s;
    bool ok = true;
    for (auto members : by_class) {
      if (members.empty()) continue;
      std::shuffle(members.begin(), members.end(), rng);
      const double want = train_fraction * static_cast<double>(members.size());
      auto take = static_cast<std::size_t>(std::floor(want));
      if (unit(rng) < want - std::floor(want)) ++take;
      if (take == 0) ok = false;
      s.train.insert(s.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(take));
      s.test.insert(s.test.end(), members.begin() + static_cast<std::ptrdiff_t>(take), members.end());
    }
    if (ok && !s.test.empty()) {
      std::sort(s.train.begin(), s.train.end());
      std::sort(s.test.begin(), s.test.end());
      return s;
    }
  }
  throw Error("could not draw a split with every class in the train set after " + std::to_string(max_retries) +
              " attempts");
}

namespace {

Matrix softmax_rows(const Matrix& logits) {
  Matrix p(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    p.row(i) = (logits.row(i).array() - mx).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

}  // namespace

double probe_split(const Matrix& h, std::span<const int> labels, const Split& split, const ProbeOptions& opts) {
  if (split.train.empty() || split.test.empty()) throw Error("probe: empty train or test split");
  const int classes = *std::max_element(labels.begin(), labels.end()) + 1;
  const auto d = h.cols();
  const auto n = static_cast<Eigen::Index>(split.train.size());
  Matrix x(n, d);
  Matrix y = Matrix::Zero(n, classes);
  for (Eigen::Index i = 0; i < n; ++i) {
    const NodeId v = split.train[static_cast<std::size_t>(i)];
    x.row(i) = h.row(v);
    y(i, labels[static_cast<std::size_t>(v)]) = 1.0;
  }
  // The softmax cross-entropy Hessian is bounded by (1/2) [X 1]^T [X 1] / n,
  // whose top eigenvalue is at most the mean squared row norm plus one.
  double lr = opts.learning_rate;
  if (lr <= 0.0) lr = 1.0 / (0.5 * (x.squaredNorm() / static_cast<double>(n) + 1.0) + opts.l2);
  Matrix w = Matrix::Zero(d, classes);
  RowVector b = RowVector::Zero(classes);
  for (int step = 0; step < opts.max_steps; ++step) {
    Matrix logits = x * w;
    logits.rowwise() += b;
    const Matrix delta = (softmax_rows(logits) - y) / static_cast<double>(n);
    const Matrix gw = x.transpose() * delta + opts.l2 * w;
    const RowVector gb = delta.colwise().sum();
    if (std::max(gw.cwiseAbs().maxCoeff(), gb.cwiseAbs().maxCoeff()) < opts.gradient_tolerance) break;
    w -= lr * gw;
    b -= lr * gb;
  }
  std::size_t correct = 0;
  for (const NodeId v : split.test) {
    const RowVector logits = h.row(v) * w + b;
    Eigen::Index best = 0;
    logits.maxCoeff(&best);
    if (best == labels[static_cast<std::size_t>(v)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(split.test.size());
}

ProbeResult linear_probe(const Matrix& h, std::span<const int> labels, double train_fraction,
                         std::span<const std::uint64_t> seeds, const ProbeOptions& opts) {
  if (static_cast<std::size_t>(h.rows()) != labels.size()) {
    throw Error("probe: " + std::to_string(h.rows()) + " embeddings but " + std::to_string(labels.size()) +
                " labels");
  }
  if (seeds.empty()) throw Error("probe: at least one seed is required");
  if (!h.allFinite()) throw Error("probe: embeddings contain non-finite values");

  Matrix scaled = h;
  const double rms = std::sqrt(h.squaredNorm() / static_cast<double>(std::max<Eigen::Index>(h.rows(), 1)));
  if (rms > 0.0) scaled /= rms;
  ProbeResult out;
  for (const std::uint64_t seed : seeds) {
    Rng rng = make_rng(seed, Stage::kProbe);
    const Split split = stratified_split(labels, train_fraction, rng, opts.max_split_retries);
    out.accuracies.push_back(probe_split(scaled, labels, split, opts));
  }
  const double n = static_cast<double>(out.accuracies.size());
  out.mean = std::accumulate(out.accuracies.begin(), out.accuracies.end(), 0.0) / n;
  double var = 0.0;
  for (double a : out.accuracies) var += (a - out.mean) * (a - out.mean);
  out.stddev = std::sqrt(var / n);
  return out;
}

BenchRecord bench_epoch(const Graph& g, const TrainConfig& cfg, const Preprocessed& pre, int warmup,
                        int measured) {
  if (measured < 1) throw Error("bench needs at least one measured epoch");
  if (warmup < 0) throw Error("warmup epochs cannot be negative");
  Trainer trainer(g, cfg, pre.reconstruction);
  for (int i = 0; i < warmup; ++i) trainer.run_epoch();

  BenchRecord rec;
  rec.variant = std::string(to_string(cfg.variant));
  rec.num_nodes = g.num_nodes();
  for (int i = 0; i < measured; ++i) {
    const auto start = std::chrono::steady_clock::now();
    const EpochRecord e = trainer.run_epoch();
    const auto stop = std::chrono::steady_clock::now();
    rec.epoch_seconds.push_back(std::chrono::duration<double>(stop - start).count());
    rec.similarity_terms = e.similarity_terms;
  }
  std::vector<double> sorted = rec.epoch_seconds;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  rec.median_epoch_seconds = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  rec.peak_rss_bytes = peak_rss_bytes();
  return rec;
}

BenchRecord bench_epoch(const Graph& g, const TrainConfig& cfg, int warmup, int measured) {
  return bench_epoch(g, cfg, preprocess(g, cfg), warmup, measured);
}

void write_bench_csv_header(std::ostream& out) {
  out << "variant,num_nodes,median_epoch_seconds,peak_rss_bytes,similarity_terms\n";
}

void write_bench_csv_row(std::ostream& out, const BenchRecord& r) {
  out << r.variant << ',' << r.num_nodes << ',' << r.median_epoch_seconds << ',' << r.peak_rss_bytes << ','
      << r.similarity_terms << '\n';
}

}  // namespace e2neg
