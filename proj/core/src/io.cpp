#include "e2neg/io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace e2neg {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string location(const fs::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void append_double(std::string& s, double v) {
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  s.append(buf.data(), ptr);
}

}  // namespace

std::vector<Edge> read_edge_list(const fs::path& path) {
  auto in = open_in(path);
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto sep = s.find_first_of(" \t,");
    if (sep == std::string_view::npos) {
      throw ParseError(location(path, lineno) + ": expected two node ids, got '" + std::string(s) + "'");
    }
    const auto a = trim(s.substr(0, sep));
    const auto b = trim(s.substr(sep + 1));
    long long u = 0;
    long long v = 0;
    if (!parse_number(a, u) || !parse_number(b, v)) {
      throw ParseError(location(path, lineno) + ": malformed edge '" + std::string(s) + "'");
    }
    if (u < 0 || v < 0 || u > INT32_MAX || v > INT32_MAX) {
      throw ParseError(location(path, lineno) + ": node id out of range");
    }
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return edges;
}

void write_edge_list(const fs::path& path, std::span<const Edge> edges) {
  auto out = open_out(path);
  std::string buf;
  for (const auto& [u, v] : edges) {
    buf += std::to_string(u);
    buf += ' ';
    buf += std::to_string(v);
    buf += '\n';
  }
  out << buf;
}

Matrix read_features(const fs::path& path) {
  const auto bytes = read_file_bytes(path);
  if (bytes.size() >= kFeatureMagic.size() &&
      std::memcmp(bytes.data(), kFeatureMagic.data(), kFeatureMagic.size()) == 0) {
    ByteReader r(bytes);
    r.get_bytes(kFeatureMagic.size());
    const auto n = r.get<std::uint64_t>();
    const auto f = r.get<std::uint64_t>();
    if (r.remaining() != n * f * sizeof(float)) {
      throw ParseError(path.string() + ": binary feature payload holds " + std::to_string(r.remaining()) +
                       " bytes, header promises " + std::to_string(n * f * sizeof(float)));
    }
    Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(f));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = static_cast<double>(r.get<float>());
    }
    return x;
  }

  std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::size_t count = 0;
    while (true) {
      const auto comma = line.find(',');
      const auto tok = trim(line.substr(0, comma));
      double v = 0.0;
      if (!parse_number(tok, v)) {
        throw ParseError(location(path, lineno) + ": malformed feature value '" + std::string(tok) + "'");
      }
      values.push_back(v);
      ++count;
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw ParseError(location(path, lineno) + ": expected " + std::to_string(cols) +
                       " feature columns, found " + std::to_string(count));
    }
    ++rows;
  }
  Matrix x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::copy(values.begin(), values.end(), x.data());
  return x;
}

void write_features(const fs::path& path, const Matrix& x, FeatureFormat format) {
  if (format == FeatureFormat::kBinary) {
    ByteWriter w;
    w.put_bytes(std::as_bytes(std::span<const char>(kFeatureMagic.data(), kFeatureMagic.size())));
    w.put<std::uint64_t>(static_cast<std::uint64_t>(x.rows()));
    w.put<std::uint64_t>(static_cast<std::uint64_t>(x.cols()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index j = 0; j < x.cols(); ++j) w.put<float>(static_cast<float>(x(i, j)));
    }
    write_file_bytes(path, w.bytes());
    return;
  }
  std::string buf;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (j) buf += ',';
      append_double(buf, x(i, j));
    }
    buf += '\n';
  }
  auto out = open_out(path);
  out << buf;
}

std::vector<int> read_labels(const fs::path& path) {
  auto in = open_in(path);
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = trim(line);
    if (s.empty()) continue;
    int v = 0;
    if (!parse_number(s, v)) {
      throw ParseError(location(path, lineno) + ": malformed label '" + std::string(s) + "'");
    }
    labels.push_back(v);
  }
  return labels;
}

void write_labels(const fs::path& path, std::span<const int> labels) {
  auto out = open_out(path);
  std::string buf;
  for (int l : labels) {
    buf += std::to_string(l);
    buf += '\n';
  }
  out << buf;
}

Graph load_graph(const fs::path& edge_path, const fs::path& feature_path,
                 const std::optional<fs::path>& label_path, Graph::BuildStats* stats) {
  const auto edges = read_edge_list(edge_path);
  Matrix x = read_features(feature_path);
  NodeId max_id = -1;
  for (const auto& [u, v] : edges) max_id = std::max({max_id, u, v});
  if (static_cast<Eigen::Index>(max_id) + 1 > x.rows()) {
    throw ParseError("node id " + std::to_string(max_id) + " in " + edge_path.string() +
                     " out of range: feature file has " + std::to_string(x.rows()) +
                     " rows (need max node id + 1 = " + std::to_string(max_id + 1) + ")");
  }
  std::optional<std::vector<int>> labels;
  if (label_path) {
    labels = read_labels(*label_path);
    if (static_cast<Eigen::Index>(labels->size()) != x.rows()) {
      throw ParseError(label_path->string() + ": " + std::to_string(labels->size()) +
                       " labels for " + std::to_string(x.rows()) + " nodes");
    }
  }
  return Graph::build(edges, std::move(x), std::move(labels), stats);
}

void save_graph(const Graph& g, const fs::path& edge_path, const fs::path& feature_path,
                const std::optional<fs::path>& label_path, FeatureFormat format) {
  write_edge_list(edge_path, g.edge_list());
  write_features(feature_path, g.features(), format);
  if (label_path) {
    const auto& l = g.labels();
    write_labels(*label_path, l);
  }
}

std::uint64_t fnv1a64(std::span<const std::byte> bytes, std::uint64_t seed) noexcept {
  std::uint64_t h = seed;
  for (std::byte b : bytes) {
    h ^= static_cast<std::uint64_t>(b);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed) noexcept {
  return fnv1a64(std::as_bytes(std::span<const char>(s.data(), s.size())), seed);
}

std::uint64_t hash_file(const fs::path& path) { return fnv1a64(read_file_bytes(path)); }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<std::byte> read_file_bytes(const fs::path& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> out(raw.size());
  if (!raw.empty()) std::memcpy(out.data(), raw.data(), raw.size());
  return out;
}

void write_file_bytes(const fs::path& path, std::span<const std::byte> bytes) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("short write to " + path.string());
}

}  // namespace e2neg
