#include "e2neg_cli/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "e2neg/error.hpp"
#include "e2neg/io.hpp"

namespace e2neg::cli {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Manifest Manifest::begin(std::string_view command, const RunConfig& cfg) {
  Manifest m;
  m.j_["command"] = command;
  m.j_["config"] = serialize_config(cfg);
  m.j_["config_hash"] = hex64(config_hash(cfg.train));
  m.j_["seed"] = cfg.train.seed;
  m.j_["inputs"] = nlohmann::json::object();
  m.j_["artifacts"] = nlohmann::json::object();
  m.j_["metrics"] = nlohmann::json::object();
  m.j_["started_at"] = utc_timestamp();
  return m;
}

Manifest Manifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path.string());
  try {
    return Manifest(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void Manifest::add_input(std::string_view name, const std::filesystem::path& path) {
  j_["inputs"][std::string(name)] = {{"path", path.string()}, {"fnv1a64", hex64(hash_file(path))}};
}

void Manifest::add_artifact(std::string_view name, const std::filesystem::path& path) {
  j_["artifacts"][std::string(name)] = path.string();
}

void Manifest::set_metric(std::string_view name, double value) { j_["metrics"][std::string(name)] = value; }

void Manifest::finish() { j_["finished_at"] = utc_timestamp(); }

void Manifest::check_artifacts() const {
  if (!j_.contains("artifacts")) return;
  for (const auto& [name, path] : j_["artifacts"].items()) {
    if (!std::filesystem::exists(path.get<std::string>())) {
      throw Error("manifest artifact '" + name + "' missing: " + path.get<std::string>());
    }
  }
}

void Manifest::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write manifest " + path.string());
  out << j_.dump(2) << '\n';
}

void record_artifact(const std::filesystem::path& manifest, std::string_view name,
                     const std::filesystem::path& artifact) {
  Manifest m = Manifest::load(manifest);
  m.add_artifact(name, artifact);
  m.check_artifacts();
  m.save(manifest);
}

}  // namespace e2neg::cli
