#include "e2neg/cache.hpp"

#include <cstdlib>
#include <string>

#include "e2neg/error.hpp"
#include "e2neg/io.hpp"

namespace e2neg {

namespace {

constexpr std::string_view kMagic = "E2NP";
constexpr std::uint32_t kVersion = 1;

template <typename T>
std::uint64_t mix(std::uint64_t h, const T& v) {
  return fnv1a64(std::as_bytes(std::span<const T>(&v, 1)), h);
}

void put_ids(ByteWriter& w, const auto& ids) {
  w.put<std::uint64_t>(ids.size());
  for (auto v : ids) w.put<std::int32_t>(static_cast<std::int32_t>(v));
}

template <typename T>
std::vector<T> get_ids(ByteReader& r) {
  const auto n = r.get<std::uint64_t>();
  if (n > r.remaining() / sizeof(std::int32_t)) throw ParseError("cache: id list longer than file");
  std::vector<T> out(static_cast<std::size_t>(n));
  for (auto& v : out) v = static_cast<T>(r.get<std::int32_t>());
  return out;
}

}  // namespace

std::uint64_t cache_key(const Graph& g, const TrainConfig& cfg) {
  std::uint64_t h = fnv1a64(std::string_view("e2neg-preprocess-v1"));
  h = mix(h, static_cast<std::int64_t>(g.num_nodes()));
  for (const auto& [u, v] : g.edge_list()) {
    h = mix(h, u);
    h = mix(h, v);
  }
  h = mix(h, cfg.clusters);
  h = mix(h, cfg.effective_eig_k());
  h = mix(h, cfg.eig_tol);
  h = mix(h, cfg.eig_max_iter);
  h = mix(h, cfg.kmeans_max_iter);
  h = mix(h, cfg.seed);
  h = mix(h, cfg.hops);
  h = mix(h, cfg.neighbor_cap);
  h = mix(h, static_cast<int>(cfg.centrality));
  h = mix(h, cfg.variant == Variant::kRandomSampling ? 1 : 0);
  if (cfg.centrality == Centrality::kRawFeatureNorm) {
    const Matrix& x = g.features();
    h = fnv1a64(std::as_bytes(std::span<const double>(x.data(), static_cast<std::size_t>(x.size()))), h);
  }
  return h;
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("E2NEG_CACHE_DIR"); env && *env) return env;
  return ".e2neg-cache";
}

std::filesystem::path cache_file(const std::filesystem::path& dir, std::uint64_t key) {
  return dir / ("preprocess-" + hex64(key) + ".e2np");
}

void save_preprocessed(const std::filesystem::path& path, std::uint64_t key, const Preprocessed& pre) {
  ByteWriter w;
  w.put_bytes(std::as_bytes(std::span<const char>(kMagic.data(), kMagic.size())));
  w.put<std::uint32_t>(kVersion);
  w.put<std::uint64_t>(key);
  const auto& s = pre.spectral;
  w.put<std::uint64_t>(static_cast<std::uint64_t>(pre.reconstruction.num_nodes));
  w.put<std::uint64_t>(static_cast<std::uint64_t>(s.k()));
  for (Eigen::Index i = 0; i < s.k(); ++i) w.put<double>(s.eigenvalues[i]);
  for (Eigen::Index i = 0; i < s.k(); ++i) w.put<double>(s.residuals[i]);
  if (s.k() > 0) {
    for (Eigen::Index i = 0; i < s.eigenvectors.size(); ++i) w.put<double>(s.eigenvectors.data()[i]);
  }
  put_ids(w, pre.clusters.assignments);
  put_ids(w, pre.clusters.centers);
  w.put<std::uint64_t>(pre.reconstruction.subgraphs.size());
  for (const auto& star : pre.reconstruction.subgraphs) {
    w.put<std::int32_t>(star.center);
    put_ids(w, star.members);
  }
  w.put<std::uint64_t>(fnv1a64(w.bytes()));
  write_file_bytes(path, w.bytes());
}

std::optional<Preprocessed> load_preprocessed(const std::filesystem::path& path, std::uint64_t key,
                                              const Graph& g) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  const auto bytes = read_file_bytes(path);
  if (bytes.size() < kMagic.size() + 4 + 8 + 8) throw ParseError(path.string() + ": truncated cache file");
  const auto body = std::span<const std::byte>(bytes).first(bytes.size() - sizeof(std::uint64_t));
  std::uint64_t stored = 0;
  std::memcpy(&stored, bytes.data() + body.size(), sizeof(stored));
  if (fnv1a64(body) != stored) {
    throw ParseError(path.string() + ": cache checksum mismatch (corrupt sidecar; delete it to recompute)");
  }
  ByteReader r(body);
  const auto magic = r.get_bytes(kMagic.size());
  if (std::memcmp(magic.data(), kMagic.data(), kMagic.size()) != 0 || r.get<std::uint32_t>() != kVersion) {
    throw ParseError(path.string() + ": not a preprocessing cache file");
  }
  if (r.get<std::uint64_t>() != key) return std::nullopt;

  Preprocessed p;
  const auto n = static_cast<Eigen::Index>(r.get<std::uint64_t>());
  const auto k = static_cast<Eigen::Index>(r.get<std::uint64_t>());
  if (n != g.num_nodes()) throw ParseError(path.string() + ": cache was built for a different graph");
  p.spectral.eigenvalues.resize(k);
  p.spectral.residuals.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) p.spectral.eigenvalues[i] = r.get<double>();
  for (Eigen::Index i = 0; i < k; ++i) p.spectral.residuals[i] = r.get<double>();
  p.spectral.eigenvectors.resize(k > 0 ? n : 0, k);
  for (Eigen::Index i = 0; i < p.spectral.eigenvectors.size(); ++i) p.spectral.eigenvectors.data()[i] = r.get<double>();
  p.clusters.assignments = get_ids<int>(r);
  p.clusters.centers = get_ids<NodeId>(r);
  p.reconstruction.num_nodes = g.num_nodes();
  p.reconstruction.features = g.shared_features();
  const auto stars = r.get<std::uint64_t>();
  for (std::uint64_t i = 0; i < stars; ++i) {
    Star s;
    s.center = r.get<std::int32_t>();
    s.members = get_ids<NodeId>(r);
    p.reconstruction.subgraphs.push_back(std::move(s));
  }
  if (r.remaining() != 0) throw ParseError(path.string() + ": trailing bytes in cache file");
  p.reconstruction.validate();
  return p;
}

CachedPreprocess preprocess_cached(const Graph& g, const TrainConfig& cfg, const std::filesystem::path& dir) {
  const std::uint64_t key = cache_key(g, cfg);
  CachedPreprocess out;
  out.path = cache_file(dir, key);
  if (auto loaded = load_preprocessed(out.path, key, g)) {
    out.data = std::move(*loaded);
    out.hit = true;
    return out;
  }
  out.data = preprocess(g, cfg);
  save_preprocessed(out.path, key, out.data);
  return out;
}

}  // namespace e2neg
