#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "e2neg/error.hpp"
#include "e2neg/graph.hpp"
#include "e2neg/types.hpp"

namespace e2neg {

static_assert(std::endian::native == std::endian::little,
              "binary formats are written in host order and assume little-endian");

namespace fs = std::filesystem;

// Binary feature file layout (little-endian):
//   bytes 0..3   magic "E2NF"
//   u64          N (rows)
//   u64          F (columns)
//   N*F float32  row-major values
inline constexpr std::string_view kFeatureMagic = "E2NF";

enum class FeatureFormat { kCsv, kBinary };

std::vector<Edge> read_edge_list(const fs::path& path);
void write_edge_list(const fs::path& path, std::span<const Edge> edges);

// Detects the binary layout by its magic; anything else is parsed as CSV.
Matrix read_features(const fs::path& path);
void write_features(const fs::path& path, const Matrix& x, FeatureFormat format);

std::vector<int> read_labels(const fs::path& path);
void write_labels(const fs::path& path, std::span<const int> labels);

Graph load_graph(const fs::path& edge_path, const fs::path& feature_path,
                 const std::optional<fs::path>& label_path = std::nullopt,
                 Graph::BuildStats* stats = nullptr);

void save_graph(const Graph& g, const fs::path& edge_path, const fs::path& feature_path,
                const std::optional<fs::path>& label_path, FeatureFormat format);

// 64-bit FNV-1a. Stable across platforms and runs, unlike std::hash.
std::uint64_t fnv1a64(std::span<const std::byte> bytes,
                      std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept;
std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept;
std::uint64_t hash_file(const fs::path& path);
std::string hex64(std::uint64_t v);

std::vector<std::byte> read_file_bytes(const fs::path& path);
void write_file_bytes(const fs::path& path, std::span<const std::byte> bytes);

// Append-only little-endian serializer used by the checkpoint and cache formats.
class ByteWriter {
 public:
  template <typename T>
  void put(const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const std::byte*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void put_bytes(std::span<const std::byte> bytes) { buf_.insert(buf_.end(), bytes.begin(), bytes.end()); }
  void put_string(std::string_view s) {
    put<std::uint64_t>(s.size());
    put_bytes(std::as_bytes(std::span<const char>(s.data(), s.size())));
  }
  const std::vector<std::byte>& bytes() const noexcept { return buf_; }
  std::vector<std::byte>& bytes() noexcept { return buf_; }

 private:
  std::vector<std::byte> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    static_assert(std::is_trivially_copyable_v<T>);
    require(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::span<const std::byte> get_bytes(std::size_t n) {
    require(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::string get_string() {
    const auto n = get<std::uint64_t>();
    auto s = get_bytes(static_cast<std::size_t>(n));
    return {reinterpret_cast<const char*>(s.data()), s.size()};
  }
  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  void require(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw ParseError("unexpected end of binary data");
  }
  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace e2neg
