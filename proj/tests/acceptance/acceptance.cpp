// Acceptance suite: one PASS/FAIL line per criterion.
//
// Usage: e2neg_acceptance [--only N[,N...]] [--known-failure N[,N...]]
// The exit code is nonzero when a criterion fails that was not declared as a
// known failure, or when a declared known failure unexpectedly passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/support.hpp"
#include "e2neg/evaluation.hpp"
#include "e2neg/io.hpp"
#include "e2neg/loss.hpp"
#include "e2neg/sbm.hpp"
#include "e2neg/spectral.hpp"
#include "e2neg/theory.hpp"
#include "e2neg/topology.hpp"
#include "e2neg/train.hpp"
#include "e2neg_cli/commands.hpp"

namespace e2neg {
namespace {

using Clock = std::chrono::steady_clock;

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict = Verdict::kFail;
  std::string detail;
};

std::string fmt_double(double v, int precision = 3) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Outcome verdict(bool ok, std::string detail) { return {ok ? Verdict::kPass : Verdict::kFail, std::move(detail)}; }

// 1. Iterative eigensolver against a dense symmetric solver.
Outcome eigensolver_oracle() {
  const auto start = Clock::now();
  double worst_value = 0.0, worst_residual = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const NodeId n = 100 + static_cast<NodeId>(seed * 10);
    const Graph g = testing::random_graph(n, 6.0 / n, 1000 + seed);
    const SparseOperator l = normalized_laplacian(g);
    EigenOptions opts;
    opts.method = EigenMethod::kKrylov;
    opts.seed = seed;
    const SpectralBundle b = smallest_eigenpairs(l, 10, opts);
    const Eigen::MatrixXd dense = testing::dense_laplacian(g);
    const Vector ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense, Eigen::EigenvaluesOnly).eigenvalues();
    for (int i = 0; i < 10; ++i) {
      worst_value = std::max(worst_value, std::abs(b.eigenvalues[i] - ref[i]));
      const double r = (dense * b.eigenvectors.col(i) - b.eigenvalues[i] * b.eigenvectors.col(i)).norm();
      worst_residual = std::max(worst_residual, r);
    }
  }
  const double t = seconds_since(start);
  return verdict(worst_value <= 1e-7 && worst_residual <= 1e-8 && t < 30.0,
                 "max |dlambda| " + fmt_double(worst_value) + ", max residual " + fmt_double(worst_residual) + ", " +
                     fmt_double(t) + " s");
}

// 2. Analytic gradients of the full loss against central differences.
Matrix gaussian(Eigen::Index r, Eigen::Index c, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

Outcome gradient_check() {
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t entries = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(500 + seed);
    std::uniform_int_distribution<int> n_dist(12, 40), f_dist(2, 16), d_dist(2, 8);
    const NodeId n = n_dist(rng);
    const int f = f_dist(rng);
    const int d = d_dist(rng);
    const int k = seed % 2 ? 4 : 2;
    const Graph g = testing::random_graph(n, 0.2, 600 + seed, f);
    std::vector<NodeId> centers;
    for (int i = 0; i < k; ++i) centers.push_back(static_cast<NodeId>(i * (n / k)));
    const ReconstructedGraph r = reconstruct(g, centers, 2, 6);
    Rng aug(seed);
    const TrainingViews views = make_views(r, random_derangement(k, aug), Variant::kE2Neg);
    ParamSet p{gaussian(f, d, rng), gaussian(d, d, rng), gaussian(1, d, rng), gaussian(d, d, rng),
               gaussian(1, d, rng)};
    ParamSet grads = ParamSet::zeros_like(p);
    compute_loss(views, g.features(), p, 0.5, NegativeMode::kCrossAndIntra, &grads);
    auto tensors = p.tensors();
    auto gt = grads.tensors();
    const double h = 1e-5;
    for (std::size_t t = 0; t < tensors.size(); ++t) {
      Matrix& w = *tensors[t];
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double keep = w.data()[i];
        w.data()[i] = keep + h;
        const double up = compute_loss(views, g.features(), p, 0.5, NegativeMode::kCrossAndIntra, nullptr).loss;
        w.data()[i] = keep - h;
        const double down = compute_loss(views, g.features(), p, 0.5, NegativeMode::kCrossAndIntra, nullptr).loss;
        w.data()[i] = keep;
        const double fd = (up - down) / (2 * h);
        const double a = gt[t]->data()[i];
        worst = std::max(worst, std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-5}));
        ++entries;
      }
    }
  }
  const double t = seconds_since(start);
  return verdict(worst <= 1e-4 && t < 60.0, std::to_string(entries) + " entries, max rel error " + fmt_double(worst) +
                                                ", " + fmt_double(t) + " s");
}

// 3. Intra and inter gradient mass coincide at the balance point.
Outcome balance_point() {
  const auto start = Clock::now();
  Rng rng(77);
  std::uniform_int_distribution<int> count(1, 20);
  std::uniform_real_distribution<double> sim(-1.0, 1.0);
  std::uniform_real_distribution<double> temp(0.2, 2.0);
  double worst = 0.0;
  int built = 0;
  while (built < 50) {
    const int p = count(rng);
    const int m = p + count(rng);
    const double tau = temp(rng);
    std::vector<double> inter(static_cast<std::size_t>(m));
    double rest = 0.0;
    for (int i = 0; i + 1 < m; ++i) {
      inter[static_cast<std::size_t>(i)] = sim(rng);
      rest += std::exp(inter[static_cast<std::size_t>(i)] / tau);
    }
    const double need = p * std::exp(1.0 / tau) - rest;
    if (need <= 0.0) continue;
    const double last = tau * std::log(need);
    if (last < -1.0 || last > 1.0) continue;
    inter.back() = last;
    const std::vector<double> intra(static_cast<std::size_t>(p), 1.0);
    const GradientReport r = gradient_sums(intra, inter, 1.0, tau);
    // Direct summation, independent of the library's stabilized path.
    double z = std::exp(1.0 / tau);
    for (double v : intra) z += std::exp(v / tau);
    for (double v : inter) z += std::exp(v / tau);
    double direct_intra = 0.0, direct_inter = 0.0;
    for (double v : intra) direct_intra += std::exp(v / tau) / (tau * z);
    for (double v : inter) direct_inter += std::exp(v / tau) / (tau * z);
    worst = std::max({worst, std::abs(r.sg_intra - r.sg_inter), std::abs(direct_intra - direct_inter)});
    ++built;
  }
  const double t = seconds_since(start);
  return verdict(worst <= 1e-9 && t < 5.0, "50 instances, max |SG_intra - SG_inter| " + fmt_double(worst) + ", " +
                                              fmt_double(t) + " s");
}

// 4. Cross-block distance bound on synthesized block models.
Outcome block_bound() {
  const auto start = Clock::now();
  Rng rng(88);
  std::uniform_int_distribution<int> k_dist(2, 5), dim_dist(2, 16), size_dist(2, 10);
  std::uniform_real_distribution<double> sep_dist(0.5, 10.0), frac(0.0, 1.0);
  std::size_t violations = 0, pairs = 0;
  for (int m = 0; m < 100; ++m) {
    const int k = k_dist(rng);
    const int dim = dim_dist(rng);
    const double sep = sep_dist(rng);
    const double delta = frac(rng) * sep;
    std::vector<int> sizes(static_cast<std::size_t>(k));
    for (int& s : sizes) s = size_dist(rng);
    const SemanticBlockModel model = synthesize_blocks(k, dim, sep, delta, sizes, 900 + m);
    violations += block_diff_stats(model).bound_violations;
    const std::size_t n = static_cast<std::size_t>(model.num_nodes());
    pairs += n * (n - 1) / 2;
  }
  const double t = seconds_since(start);
  return verdict(violations == 0 && t < 10.0, "100 models, " + std::to_string(pairs) + " pairs, " +
                                                  std::to_string(violations) + " violations, " + fmt_double(t) + " s");
}

// 5. Desk-scale end-to-end comparison on a planted-partition graph.
Outcome end_to_end() {
  const auto start = Clock::now();
  std::vector<double> e2neg_acc, raw_acc, random_acc;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SbmParams sp;
    sp.blocks = 3;
    sp.nodes_per_block = 100;
    sp.p_in = 0.1;
    sp.p_out = 0.01;
    sp.separation = 4.0;
    sp.delta = 1.0;
    sp.seed = seed;
    const Graph g = generate_sbm(sp).graph;
    const std::vector<std::uint64_t> probe_seed{seed};
    TrainConfig cfg;
    cfg.hidden_dim = 64;
    cfg.epochs = 200;
    cfg.seed = seed;
    const auto run = [&](Variant v) {
      cfg.variant = v;
      const TrainResult r = train(g, cfg);
      const Matrix h = embed_original(g, r.params.weights, EmbedTarget::kEncoder);
      return linear_probe(h, g.labels(), 0.1, probe_seed).mean;
    };
    e2neg_acc.push_back(run(Variant::kE2Neg));
    random_acc.push_back(run(Variant::kRandomSampling));
    raw_acc.push_back(linear_probe(g.features(), g.labels(), 0.1, probe_seed).mean);
  }
  const auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
  const double e = 100 * mean(e2neg_acc), raw = 100 * mean(raw_acc), rnd = 100 * mean(random_acc);
  const double t = seconds_since(start);
  return verdict(e >= raw + 3.0 && e >= rnd && t < 300.0,
                 "e2neg " + fmt_double(e, 4) + "%, raw features " + fmt_double(raw, 4) + "%, random sampling " +
                     fmt_double(rnd, 4) + "%, " + fmt_double(t) + " s");
}

// 6. Loss-stage cost depends on k only; per-epoch time against full sampling.
Outcome efficiency() {
  const auto start = Clock::now();
  TrainConfig cfg;
  cfg.clusters = 20;
  cfg.hidden_dim = 256;
  std::vector<std::uint64_t> terms;
  bool faster = true;
  std::string detail;
  for (int n : {2000, 4000}) {
    SbmParams sp;
    sp.blocks = 4;
    sp.nodes_per_block = n / 4;
    sp.p_in = 0.02;
    sp.p_out = 0.002;
    sp.seed = 5;
    const Graph g = generate_sbm(sp).graph;
    const Preprocessed pre = preprocess(g, cfg);
    cfg.variant = Variant::kE2Neg;
    const BenchRecord fast = bench_epoch(g, cfg, pre, 1, 3);
    cfg.variant = Variant::kFullSampling;
    const BenchRecord full = bench_epoch(g, cfg, pre, 1, 3);
    terms.push_back(fast.similarity_terms);
    faster = faster && fast.median_epoch_seconds < full.median_epoch_seconds;
    detail += "N=" + std::to_string(n) + ": terms " + std::to_string(fast.similarity_terms) + " vs " +
              std::to_string(full.similarity_terms) + ", epoch " + fmt_double(1e3 * fast.median_epoch_seconds) +
              " ms vs " + fmt_double(1e3 * full.median_epoch_seconds) + " ms; ";
  }
  const double t = seconds_since(start);
  return verdict(terms[0] == terms[1] && faster && t < 180.0, detail + fmt_double(t) + " s");
}

// 8. Every command repeated with the same config and seed yields identical bytes.
int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "e2neg");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) std::cerr << err.str();
  return code;
}

// Drops the named columns, which carry wall-clock or memory readings.
std::string without_columns(const std::string& csv, const std::set<std::string>& drop) {
  std::istringstream in(csv);
  std::string line, out;
  std::vector<bool> keep;
  bool header = true;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (header) {
      for (const auto& c : cells) keep.push_back(!drop.count(c));
      header = false;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i < keep.size() && keep[i]) out += cells[i] + ",";
    }
    out += "\n";
  }
  return out;
}

Outcome determinism() {
  const auto start = Clock::now();
  testing::TempDir dir;
  const std::set<std::string> timing{"wall_ms", "rss_bytes", "epoch_time_ms", "peak_rss", "median_epoch_ms"};
  std::vector<std::string> mismatches;
  const auto compare = [&](const fs::path& a, const fs::path& b, bool strip) {
    std::string x = cli::read_text_file(a), y = cli::read_text_file(b);
    if (strip) {
      x = without_columns(x, timing);
      y = without_columns(y, timing);
    }
    if (x != y) mismatches.push_back(a.filename().string());
  };
  for (const char* run : {"a", "b"}) {
    const fs::path d = dir / run;
    const std::string data = (d / "data").string();
    const std::string conf = (d / "data" / "dataset.conf").string();
    const std::string manifest = (d / "train" / "manifest.json").string();
    const int code =
        cli({"sbm", "--out", data, "--nodes-per-block", "60", "--seed", "9"}) |
        cli({"train", "--config", conf, "--out", (d / "train").string(), "--cache-dir", (d / "cache").string(),
             "--epochs", "20", "--hidden-dim", "32", "--clusters", "6", "--seed", "9"}) |
        cli({"embed", "--config", conf, "--checkpoint", (d / "train" / "checkpoint.e2nc").string(), "--out",
             (d / "emb.bin").string(), "--manifest", manifest}) |
        cli({"probe", "--embeddings", (d / "emb.bin").string(), "--labels", (d / "data" / "labels.txt").string(),
             "--out", (d / "probe.csv").string(), "--manifest", manifest}) |
        cli({"bench", "--config", conf, "--hidden-dim", "32", "--clusters", "6", "--measured", "2", "--out",
             (d / "bench.csv").string()}) |
        cli({"theory", "--out", (d / "theory.csv").string()});
    if (code != 0) return {Verdict::kFail, std::string("command failed in run ") + run};
  }
  const fs::path a = dir / "a", b = dir / "b";
  for (const char* f : {"edges.txt", "features.csv", "labels.txt"}) compare(a / "data" / f, b / "data" / f, false);
  if (read_file_bytes(a / "train" / "checkpoint.e2nc") != read_file_bytes(b / "train" / "checkpoint.e2nc")) {
    mismatches.push_back("checkpoint.e2nc");
  }
  if (read_file_bytes(a / "emb.bin") != read_file_bytes(b / "emb.bin")) mismatches.push_back("emb.bin");
  compare(a / "train" / "train_log.csv", b / "train" / "train_log.csv", true);
  compare(a / "probe.csv", b / "probe.csv", true);
  compare(a / "bench.csv", b / "bench.csv", true);
  compare(a / "theory.csv", b / "theory.csv", false);
  const double t = seconds_since(start);
  std::string detail = mismatches.empty() ? "checkpoint, embeddings and 7 CSV/text artifacts identical"
                                          : "mismatch in";
  for (const auto& m : mismatches) detail += " " + m;
  return verdict(mismatches.empty(), detail + ", " + fmt_double(t) + " s");
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.insert(std::stoi(item));
  return out;
}

}  // namespace
}  // namespace e2neg

int main(int argc, char** argv) {
  using namespace e2neg;
  std::set<int> only, known;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--only") {
      only = parse_list(argv[i + 1]);
    } else if (flag == "--known-failure") {
      known = parse_list(argv[i + 1]);
    } else {
      std::cerr << "unknown flag " << flag << "\n";
      return 2;
    }
  }

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "eigensolver matches dense oracle", eigensolver_oracle},
      {2, "loss gradients match finite differences", gradient_check},
      {3, "gradient balance point", balance_point},
      {4, "cross-block distance bound", block_bound},
      {5, "end-to-end probe accuracy on SBM-300", end_to_end},
      {6, "similarity terms independent of N; faster than full sampling", efficiency},
      {7, "PubMed reproduction (optional long run)",
       [] { return Outcome{Verdict::kSkip, "not run here; see scripts/reproduce_pubmed.sh"}; }},
      {8, "byte-identical reruns", determinism},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Verdict::kFail, std::string("exception: ") + e.what()};
    }
    const bool expected_fail = known.count(c.id) > 0;
    const char* tag = o.verdict == Verdict::kPass ? "PASS" : o.verdict == Verdict::kFail ? "FAIL" : "SKIP";
    std::string note;
    if (o.verdict == Verdict::kFail && expected_fail) note = " [known failure]";
    if (o.verdict == Verdict::kPass && expected_fail) note = " [declared known failure now passes]";
    std::cout << tag << "  " << c.id << "  " << c.name << ": " << o.detail << note << std::endl;
    if ((o.verdict == Verdict::kFail && !expected_fail) || (o.verdict == Verdict::kPass && expected_fail)) {
      ++unexpected;
    }
  }
  return unexpected == 0 ? 0 : 1;
}
