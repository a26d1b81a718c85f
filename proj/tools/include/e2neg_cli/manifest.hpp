#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "e2neg_cli/config.hpp"

namespace e2neg::cli {

// Run manifest, written as JSON next to the run's artifacts:
//   command, config (canonical text), config_hash, seed,
//   inputs     { name: { path, fnv1a64 } }
//   artifacts  { name: path }
//   metrics    { name: number }
//   started_at, finished_at (UTC, ISO 8601)
class Manifest {
 public:
  Manifest() = default;
  explicit Manifest(nlohmann::json j) : j_(std::move(j)) {}

  static Manifest begin(std::string_view command, const RunConfig& cfg);
  static Manifest load(const std::filesystem::path& path);

  void add_input(std::string_view name, const std::filesystem::path& path);
  void add_artifact(std::string_view name, const std::filesystem::path& path);
  void set_metric(std::string_view name, double value);
  void finish();
  // Throws Error if a listed artifact is missing.
  void check_artifacts() const;
  void save(const std::filesystem::path& path) const;

  const nlohmann::json& json() const noexcept { return j_; }

 private:
  nlohmann::json j_ = nlohmann::json::object();
};

// Adds one artifact to an existing manifest file in place.
void record_artifact(const std::filesystem::path& manifest, std::string_view name,
                     const std::filesystem::path& artifact);

std::string utc_timestamp();

}  // namespace e2neg::cli
