#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "e2neg/evaluation.hpp"
#include "e2neg/train.hpp"

namespace e2neg::cli {

// Everything one run needs: training settings plus dataset locations.
//
// On disk this is a flat "key = value" text file, one pair per line, '#'
// comments allowed. Keys:
//
//   dataset edges features labels
//   learning_rate weight_decay hidden_dim epochs clusters neighbor_cap hops
//   temperature seed variant eig_k eig_tol eig_max_iter kmeans_max_iter
//   centrality negatives probe_on
//
// serialize() writes every key in that order, so the text of a config is
// canonical and its hash identifies the run.
struct RunConfig {
  std::string dataset = "unnamed";
  std::string edges;
  std::string features;
  std::string labels;
  TrainConfig train;
  EmbedTarget probe_on = EmbedTarget::kEncoder;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Sets one key from its text form. Throws Error on an unknown key or a value
// that does not parse.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);

// Applies the pairs in `text` on top of `cfg`; keys not mentioned keep their
// current values.
void apply_config_text(RunConfig& cfg, std::string_view text);
RunConfig parse_config(std::string_view text);
std::string read_text_file(const std::filesystem::path& path);
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& cfg);
void save_config(const std::filesystem::path& path, const RunConfig& cfg);

// FNV-1a of the serialized training settings; dataset paths are left out so a
// moved dataset keeps its hash.
std::uint64_t config_hash(const TrainConfig& cfg);

// Per-dataset hyperparameters: lr, weight decay, hidden width, epochs,
// clusters, neighbor cap. Names are lower case: pubmed, cs, photo, computers,
// physics, wiki-cs.
std::optional<TrainConfig> preset(std::string_view name);

}  // namespace e2neg::cli
