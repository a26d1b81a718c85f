#include "e2neg_cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "e2neg/error.hpp"
#include "e2neg/io.hpp"

namespace e2neg::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error("config key '" + std::string(key) + "': cannot parse '" + std::string(v) + "'");
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
  auto& t = cfg.train;
  if (key == "dataset") cfg.dataset = value;
  else if (key == "edges") cfg.edges = value;
  else if (key == "features") cfg.features = value;
  else if (key == "labels") cfg.labels = value;
  else if (key == "learning_rate") t.learning_rate = parse_number<double>(key, value);
  else if (key == "weight_decay") t.weight_decay = parse_number<double>(key, value);
  else if (key == "hidden_dim") t.hidden_dim = parse_number<int>(key, value);
  else if (key == "epochs") t.epochs = parse_number<int>(key, value);
  else if (key == "clusters") t.clusters = parse_number<int>(key, value);
  else if (key == "neighbor_cap") t.neighbor_cap = parse_number<int>(key, value);
  else if (key == "hops") t.hops = parse_number<int>(key, value);
  else if (key == "temperature") t.temperature = parse_number<double>(key, value);
  else if (key == "seed") t.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "variant") t.variant = parse_variant(value);
  else if (key == "eig_k") t.eig_k = parse_number<int>(key, value);
  else if (key == "eig_tol") t.eig_tol = parse_number<double>(key, value);
  else if (key == "eig_max_iter") t.eig_max_iter = parse_number<int>(key, value);
  else if (key == "kmeans_max_iter") t.kmeans_max_iter = parse_number<int>(key, value);
  else if (key == "centrality") t.centrality = parse_centrality(value);
  else if (key == "negatives") t.negatives = parse_negative_mode(value);
  else if (key == "probe_on") cfg.probe_on = parse_embed_target(value);
  else throw Error("unknown config key '" + std::string(key) + "'");
}

void apply_config_text(RunConfig& cfg, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  apply_config_text(cfg, text);
  return cfg;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path)); }

namespace {

std::string serialize_train(const TrainConfig& t) {
  std::ostringstream out;
  out << "learning_rate = " << format_double(t.learning_rate) << '\n'
      << "weight_decay = " << format_double(t.weight_decay) << '\n'
      << "hidden_dim = " << t.hidden_dim << '\n'
      << "epochs = " << t.epochs << '\n'
      << "clusters = " << t.clusters << '\n'
      << "neighbor_cap = " << t.neighbor_cap << '\n'
      << "hops = " << t.hops << '\n'
      << "temperature = " << format_double(t.temperature) << '\n'
      << "seed = " << t.seed << '\n'
      << "variant = " << to_string(t.variant) << '\n'
      << "eig_k = " << t.eig_k << '\n'
      << "eig_tol = " << format_double(t.eig_tol) << '\n'
      << "eig_max_iter = " << t.eig_max_iter << '\n'
      << "kmeans_max_iter = " << t.kmeans_max_iter << '\n'
      << "centrality = " << to_string(t.centrality) << '\n'
      << "negatives = " << to_string(t.negatives) << '\n';
  return out.str();
}

}  // namespace

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "dataset = " << cfg.dataset << '\n'
      << "edges = " << cfg.edges << '\n'
      << "features = " << cfg.features << '\n'
      << "labels = " << cfg.labels << '\n'
      << serialize_train(cfg.train) << "probe_on = " << to_string(cfg.probe_on) << '\n';
  return out.str();
}

void save_config(const std::filesystem::path& path, const RunConfig& cfg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write config " + path.string());
  out << serialize_config(cfg);
}

std::uint64_t config_hash(const TrainConfig& cfg) { return fnv1a64(serialize_train(cfg)); }

std::optional<TrainConfig> preset(std::string_view name) {
  struct Row {
    std::string_view name;
    double lr, wd;
    int hidden, epochs, clusters, neighbors;
  };
  static constexpr Row kRows[] = {
      {"pubmed", 0.00005, 0.0005, 4096, 1500, 30, 100},
      {"cs", 0.0001, 0.00005, 2048, 1500, 50, 100},
      {"photo", 0.00001, 0.00001, 4096, 600, 10, 100},
      {"computers", 0.00005, 0.00001, 4096, 200, 30, 100},
      {"physics", 0.00001, 0.00005, 2048, 600, 15, 100},
      {"wiki-cs", 0.00001, 0.00005, 512, 200, 15, 10},
  };
  for (const auto& r : kRows) {
    if (r.name != name) continue;
    TrainConfig t;
    t.learning_rate = r.lr;
    t.weight_decay = r.wd;
    t.hidden_dim = r.hidden;
    t.epochs = r.epochs;
    t.clusters = r.clusters;
    t.neighbor_cap = r.neighbors;
    return t;
  }
  return std::nullopt;
}

}  // namespace e2neg::cli
