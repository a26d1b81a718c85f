#include "e2neg_cli/commands.hpp"

#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "e2neg/cache.hpp"
#include "e2neg/checkpoint.hpp"
#include "e2neg/error.hpp"
#include "e2neg/evaluation.hpp"
#include "e2neg/io.hpp"
#include "e2neg/process.hpp"
#include "e2neg_cli/manifest.hpp"

namespace e2neg::cli {

namespace {

Graph load_dataset(const RunConfig& cfg, bool need_labels) {
  if (cfg.edges.empty() || cfg.features.empty()) throw Error("dataset needs both edges and features paths");
  if (need_labels && cfg.labels.empty()) throw Error("this command needs a labels path");
  std::optional<fs::path> labels;
  if (!cfg.labels.empty()) labels = cfg.labels;
  return load_graph(cfg.edges, cfg.features, labels);
}

void add_dataset_inputs(Manifest& m, const RunConfig& cfg) {
  m.add_input("edges", cfg.edges);
  m.add_input("features", cfg.features);
  if (!cfg.labels.empty()) m.add_input("labels", cfg.labels);
}

std::ofstream open_out(const fs::path& path, bool append = false) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, append ? std::ios::app | std::ios::binary : std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  return f;
}

fs::path cache_dir_or_default(const fs::path& p) { return p.empty() ? default_cache_dir() : p; }

}  // namespace

PreprocessSummary cmd_preprocess(const PreprocessOptions& opts, std::ostream& out) {
  const Graph g = load_dataset(opts.config, false);
  const fs::path dir = cache_dir_or_default(opts.cache_dir);
  fs::create_directories(dir);
  const CachedPreprocess c = preprocess_cached(g, opts.config.train, dir);
  PreprocessSummary s{c.path, c.hit, c.data.reconstruction.k(), c.data.reconstruction.covered_nodes()};
  out << (s.hit ? "cache hit: " : "cache miss, wrote: ") << s.cache_path.string() << '\n'
      << "centers: " << s.centers << ", nodes covered by stars: " << s.covered_nodes << " of " << g.num_nodes()
      << '\n';
  return s;
}

fs::path cmd_train(const TrainOptions& opts, std::ostream& out) {
  const RunConfig& cfg = opts.config;
  cfg.train.validate();
  Manifest manifest = Manifest::begin("train", cfg);
  const Graph g = load_dataset(cfg, false);
  add_dataset_inputs(manifest, cfg);
  fs::create_directories(opts.out_dir);

  const fs::path config_path = opts.out_dir / "config.txt";
  const fs::path log_path = opts.out_dir / "train_log.csv";
  const fs::path ckpt_path = opts.out_dir / "checkpoint.e2nc";
  const fs::path manifest_path = opts.out_dir / "manifest.json";
  save_config(config_path, cfg);

  Checkpoint ckpt;
  ckpt.config_hash = config_hash(cfg.train);
  std::ofstream log = open_out(log_path);
  log << "epoch,loss,wall_ms,rss_bytes\n";
  log << std::setprecision(17);
  double total_ms = 0.0;
  if (cfg.train.epochs == 0) {
    ckpt.params = init_params(g.num_features(), cfg.train.hidden_dim, cfg.train.seed);
  } else {
    fs::create_directories(cache_dir_or_default(opts.cache_dir));
    CachedPreprocess pre = preprocess_cached(g, cfg.train, cache_dir_or_default(opts.cache_dir));
    manifest.add_artifact("preprocess_cache", pre.path);
    out << (pre.hit ? "preprocessing: cache hit\n" : "preprocessing: computed\n");
    Trainer trainer(g, cfg.train, std::move(pre.data.reconstruction));
    for (int e = 0; e < cfg.train.epochs; ++e) {
      const EpochRecord r = trainer.run_epoch();
      total_ms += r.wall_ms;
      log << r.epoch << ',' << r.loss << ',' << r.wall_ms << ',' << r.rss_bytes << '\n';
      if (e == 0 || e + 1 == cfg.train.epochs || (e + 1) % 100 == 0) {
        out << "epoch " << r.epoch << " loss " << r.loss << '\n';
      }
    }
    ckpt.params = trainer.params();
    ckpt.epoch = trainer.epoch();
  }
  log.close();
  save_checkpoint(ckpt_path, ckpt);

  manifest.add_artifact("config", config_path);
  manifest.add_artifact("train_log", log_path);
  manifest.add_artifact("checkpoint", ckpt_path);
  manifest.set_metric("epochs", cfg.train.epochs);
  manifest.set_metric("epoch_time_ms", cfg.train.epochs > 0 ? total_ms / cfg.train.epochs : 0.0);
  manifest.set_metric("peak_rss", static_cast<double>(peak_rss_bytes()));
  manifest.finish();
  manifest.save(manifest_path);
  manifest.check_artifacts();
  out << "checkpoint: " << ckpt_path.string() << '\n' << "manifest: " << manifest_path.string() << '\n';
  return manifest_path;
}

void cmd_embed(const EmbedOptions& opts, std::ostream& out) {
  const Graph g = load_dataset(opts.config, false);
  const Checkpoint ckpt = load_checkpoint(opts.checkpoint);
  const Matrix h = embed_original(g, ckpt.params.weights, opts.config.probe_on);
  if (opts.out.has_parent_path()) fs::create_directories(opts.out.parent_path());
  write_features(opts.out, h, FeatureFormat::kBinary);
  if (opts.manifest) record_artifact(*opts.manifest, "embeddings", opts.out);
  out << "embedded " << h.rows() << " nodes x " << h.cols() << " (" << to_string(opts.config.probe_on)
      << ") -> " << opts.out.string() << '\n';
}

double cmd_probe(const ProbeRunOptions& opts, std::ostream& out) {
  const Matrix h = read_features(opts.embeddings);
  const std::vector<int> labels = read_labels(opts.labels);
  const ProbeResult r = linear_probe(h, labels, opts.train_fraction, opts.seeds);

  double epoch_ms = 0.0;
  double peak_rss = 0.0;
  std::string variant = opts.variant;
  std::string dataset = opts.dataset;
  if (opts.manifest) {
    const Manifest m = Manifest::load(*opts.manifest);
    const auto& metrics = m.json().value("metrics", nlohmann::json::object());
    epoch_ms = metrics.value("epoch_time_ms", 0.0);
    peak_rss = metrics.value("peak_rss", 0.0);
    if (m.json().contains("config")) {
      const RunConfig cfg = parse_config(m.json()["config"].get<std::string>());
      variant = std::string(to_string(cfg.train.variant));
      dataset = cfg.dataset;
    }
  }

  const bool header = !opts.append || !fs::exists(opts.out) || fs::file_size(opts.out) == 0;
  std::ofstream csv = open_out(opts.out, opts.append);
  if (header) csv << "variant,dataset,seed,accuracy,epoch_time_ms,peak_rss\n";
  csv << std::setprecision(17);
  for (std::size_t i = 0; i < opts.seeds.size(); ++i) {
    csv << variant << ',' << dataset << ',' << opts.seeds[i] << ',' << r.accuracies[i] << ',' << epoch_ms << ','
        << static_cast<std::int64_t>(peak_rss) << '\n';
  }
  csv.close();
  if (opts.manifest) record_artifact(*opts.manifest, "probe_results", opts.out);
  out << std::fixed << std::setprecision(2) << "probe accuracy: " << 100.0 * r.mean << " +- " << 100.0 * r.stddev
      << " over " << opts.seeds.size() << " seeds\n";
  out.unsetf(std::ios::fixed);
  return r.mean;
}

void cmd_bench(const BenchOptions& opts, std::ostream& out) {
  const Graph g = load_dataset(opts.config, false);
  std::ofstream csv = open_out(opts.out);
  csv << "variant,dataset,num_nodes,median_epoch_ms,peak_rss,similarity_terms\n";
  for (const auto& name : opts.variants) {
    TrainConfig cfg = opts.config.train;
    cfg.variant = parse_variant(name);
    const BenchRecord r = bench_epoch(g, cfg, opts.warmup, opts.measured);
    csv << r.variant << ',' << opts.config.dataset << ',' << r.num_nodes << ',' << 1000.0 * r.median_epoch_seconds
        << ',' << r.peak_rss_bytes << ',' << r.similarity_terms << '\n';
    out << r.variant << ": " << 1000.0 * r.median_epoch_seconds << " ms/epoch, " << r.similarity_terms
        << " similarity terms per epoch\n";
  }
  csv.close();
  if (opts.manifest) record_artifact(*opts.manifest, "bench", opts.out);
}

std::size_t cmd_theory(const TheoryOptions& opts, std::ostream& out) {
  const auto rows = threshold_sweep(opts.params, opts.counts, opts.taus);
  std::ofstream csv = open_out(opts.out);
  write_sweep_csv(csv, rows);
  csv.close();
  if (opts.manifest) record_artifact(*opts.manifest, "theory_sweep", opts.out);
  out << "wrote " << rows.size() << " gradient reports to " << opts.out.string() << '\n';
  return rows.size();
}

void cmd_sbm(const SbmOptions& opts, std::ostream& out) {
  const SbmDataset d = generate_sbm(opts.params);
  fs::create_directories(opts.out_dir);
  RunConfig cfg;
  cfg.dataset = "sbm";
  cfg.edges = (opts.out_dir / "edges.txt").string();
  cfg.features = (opts.out_dir / (opts.binary_features ? "features.bin" : "features.csv")).string();
  cfg.labels = (opts.out_dir / "labels.txt").string();
  cfg.train.seed = opts.params.seed;
  save_graph(d.graph, cfg.edges, cfg.features, fs::path(cfg.labels),
             opts.binary_features ? FeatureFormat::kBinary : FeatureFormat::kCsv);
  save_config(opts.out_dir / "dataset.conf", cfg);
  out << "sbm: " << d.graph.num_nodes() << " nodes, " << d.graph.num_edges() << " edges, "
      << opts.params.blocks << " blocks -> " << opts.out_dir.string() << '\n';
}

}  // namespace e2neg::cli
