#include <algorithm>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "e2neg/error.hpp"
#include "e2neg_cli/commands.hpp"

namespace e2neg::cli {

namespace {

constexpr const char* kFlagKeys[] = {"dataset", "edges", "features", "labels", "learning_rate", "weight_decay",
                                     "hidden_dim", "epochs", "clusters", "neighbor_cap", "hops", "temperature",
                                     "seed", "variant", "eig_k", "eig_tol", "centrality", "negatives",
                                     "probe_on"};

// Config sources, lowest priority first: preset, --config file, --set pairs,
// then the per-key flags.
struct ConfigFlags {
  std::string preset;
  std::string file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;

  void attach(CLI::App* app) {
    app->add_option("--preset", preset, "hyperparameter preset: pubmed, cs, photo, computers, physics, wiki-cs");
    app->add_option("--config", file, "key = value config file")->check(CLI::ExistingFile);
    app->add_option("--set", sets, "override a config key, key=value (repeatable)");
    for (const char* key : kFlagKeys) {
      std::string flag = std::string("--") + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      app->add_option(flag, flags[key], std::string("config key ") + key);
    }
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!preset.empty()) {
      const auto p = e2neg::cli::preset(preset);
      if (!p) throw Error("unknown preset '" + preset + "'");
      cfg.train = *p;
      cfg.dataset = preset;
    }
    if (!file.empty()) apply_config_text(cfg, read_text_file(file));
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error("--set expects key=value, got '" + kv + "'");
      set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [key, value] : flags) {
      if (!value.empty()) set_config_value(cfg, key, value);
    }
    return cfg;
  }
};

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"E2Neg: graph contrastive learning with spectral center sampling"};
  app.require_subcommand(1);

  ConfigFlags pre_cfg, train_cfg, embed_cfg, bench_cfg;
  PreprocessOptions pre_opts;
  TrainOptions train_opts;
  EmbedOptions embed_opts;
  ProbeRunOptions probe_opts;
  BenchOptions bench_opts;
  TheoryOptions theory_opts;
  SbmOptions sbm_opts;
  std::string embed_manifest, probe_manifest, bench_manifest, theory_manifest;

  auto* pre = app.add_subcommand("preprocess", "spectral clustering, center selection and star reconstruction");
  pre_cfg.attach(pre);
  pre->add_option("--cache-dir", pre_opts.cache_dir, "cache directory (default $E2NEG_CACHE_DIR or .e2neg-cache)");

  auto* train = app.add_subcommand("train", "train the encoder and write checkpoint, log and manifest");
  train_cfg.attach(train);
  train->add_option("--out", train_opts.out_dir, "run directory")->required();
  train->add_option("--cache-dir", train_opts.cache_dir, "preprocessing cache directory");

  auto* embed = app.add_subcommand("embed", "embed every node of the original graph");
  embed_cfg.attach(embed);
  embed->add_option("--checkpoint", embed_opts.checkpoint, "checkpoint file")->required()->check(CLI::ExistingFile);
  embed->add_option("--out", embed_opts.out, "output embedding file (binary feature layout)")->required();
  embed->add_option("--manifest", embed_manifest, "manifest to record the artifact in");

  auto* probe = app.add_subcommand("probe", "linear-probe node classification on stored embeddings");
  probe->add_option("--embeddings", probe_opts.embeddings, "embedding file")->required()->check(CLI::ExistingFile);
  probe->add_option("--labels", probe_opts.labels, "label file")->required()->check(CLI::ExistingFile);
  probe->add_option("--train-fraction", probe_opts.train_fraction, "fraction of each class used for training");
  probe->add_option("--seeds", probe_opts.seeds, "split seeds")->delimiter(',');
  probe->add_option("--variant", probe_opts.variant, "variant name written to the results");
  probe->add_option("--dataset", probe_opts.dataset, "dataset name written to the results");
  probe->add_option("--manifest", probe_manifest, "training manifest; supplies variant, dataset and timings");
  probe->add_option("--out", probe_opts.out, "results CSV")->required();
  probe->add_flag("--append", probe_opts.append, "append to an existing results CSV");

  auto* bench = app.add_subcommand("bench", "per-epoch time, peak memory and similarity-term counts");
  bench_cfg.attach(bench);
  bench->add_option("--variants", bench_opts.variants, "variants to compare")->delimiter(',');
  bench->add_option("--warmup", bench_opts.warmup, "untimed epochs");
  bench->add_option("--measured", bench_opts.measured, "timed epochs")->check(CLI::PositiveNumber);
  bench->add_option("--out", bench_opts.out, "bench CSV")->required();
  bench->add_option("--manifest", bench_manifest, "manifest to record the artifact in");

  auto* theory = app.add_subcommand("theory", "intra/inter negative gradient sweep on semantic blocks");
  auto& sp = theory_opts.params;
  theory->add_option("--counts", theory_opts.counts, "same-block negative counts")->delimiter(',');
  theory->add_option("--taus", theory_opts.taus, "temperatures")->delimiter(',');
  theory->add_option("--blocks", sp.blocks, "number of semantic blocks");
  theory->add_option("--dim", sp.dim, "feature dimension");
  theory->add_option("--separation", sp.separation, "minimum distance between core vectors");
  theory->add_option("--delta", sp.delta, "deviation bound");
  theory->add_option("--inter", sp.inter_nodes_per_block, "nodes in every other block");
  theory->add_option("--seed", sp.seed, "seed");
  theory->add_option("--out", theory_opts.out, "sweep CSV")->required();
  theory->add_option("--manifest", theory_manifest, "manifest to record the artifact in");

  auto* sbm = app.add_subcommand("sbm", "generate a stochastic block model dataset");
  auto& bp = sbm_opts.params;
  sbm->add_option("--blocks", bp.blocks, "number of blocks");
  sbm->add_option("--nodes-per-block", bp.nodes_per_block, "nodes per block");
  sbm->add_option("--p-in", bp.p_in, "edge probability inside a block");
  sbm->add_option("--p-out", bp.p_out, "edge probability across blocks");
  sbm->add_option("--feature-dim", bp.feature_dim, "feature dimension");
  sbm->add_option("--separation", bp.separation, "distance between block feature centers");
  sbm->add_option("--delta", bp.delta, "feature deviation bound");
  sbm->add_option("--seed", bp.seed, "seed");
  sbm->add_flag("--binary", sbm_opts.binary_features, "write features in the binary layout");
  sbm->add_option("--out", sbm_opts.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (pre->parsed()) {
      pre_opts.config = pre_cfg.resolve();
      cmd_preprocess(pre_opts, out);
    } else if (train->parsed()) {
      train_opts.config = train_cfg.resolve();
      cmd_train(train_opts, out);
    } else if (embed->parsed()) {
      embed_opts.config = embed_cfg.resolve();
      if (!embed_manifest.empty()) embed_opts.manifest = embed_manifest;
      cmd_embed(embed_opts, out);
    } else if (probe->parsed()) {
      if (!probe_manifest.empty()) probe_opts.manifest = probe_manifest;
      cmd_probe(probe_opts, out);
    } else if (bench->parsed()) {
      bench_opts.config = bench_cfg.resolve();
      if (!bench_manifest.empty()) bench_opts.manifest = bench_manifest;
      cmd_bench(bench_opts, out);
    } else if (theory->parsed()) {
      if (!theory_manifest.empty()) theory_opts.manifest = theory_manifest;
      cmd_theory(theory_opts, out);
    } else if (sbm->parsed()) {
      cmd_sbm(sbm_opts, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace e2neg::cli
