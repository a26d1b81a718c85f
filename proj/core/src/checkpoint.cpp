#include "e2neg/checkpoint.hpp"

#include <string>

#include "e2neg/error.hpp"
#include "e2neg/io.hpp"

namespace e2neg {

namespace {

constexpr std::string_view kMagic = "E2NC";
constexpr std::uint32_t kVersion = 1;

void put_matrix_f32(ByteWriter& w, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) w.put<float>(static_cast<float>(m.data()[i]));
}

Matrix get_matrix_f32(ByteReader& r, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<double>(r.get<float>());
  return m;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  ByteWriter w;
  w.put_bytes(std::as_bytes(std::span<const char>(kMagic.data(), kMagic.size())));
  w.put<std::uint32_t>(kVersion);
  w.put<std::uint64_t>(ckpt.config_hash);
  w.put<std::int64_t>(ckpt.epoch);
  w.put<std::int64_t>(ckpt.params.adam.step);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(ParamSet::kCount));
  const auto vals = ckpt.params.weights.tensors();
  const auto m1 = ckpt.params.adam.first_moment.tensors();
  const auto m2 = ckpt.params.adam.second_moment.tensors();
  for (std::size_t i = 0; i < ParamSet::kCount; ++i) {
    w.put_string(ParamSet::kNames[i]);
    w.put<std::uint64_t>(static_cast<std::uint64_t>(vals[i]->rows()));
    w.put<std::uint64_t>(static_cast<std::uint64_t>(vals[i]->cols()));
    put_matrix_f32(w, *vals[i]);
    put_matrix_f32(w, *m1[i]);
    put_matrix_f32(w, *m2[i]);
  }
  w.put<std::uint64_t>(fnv1a64(w.bytes()));
  write_file_bytes(path, w.bytes());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  if (bytes.size() < kMagic.size() + sizeof(std::uint64_t)) throw ParseError(path.string() + ": truncated checkpoint");
  const auto body = std::span<const std::byte>(bytes).first(bytes.size() - sizeof(std::uint64_t));
  std::uint64_t stored = 0;
  std::memcpy(&stored, bytes.data() + body.size(), sizeof(stored));
  if (fnv1a64(body) != stored) throw ParseError(path.string() + ": checkpoint checksum mismatch");

  ByteReader r(body);
  const auto magic = r.get_bytes(kMagic.size());
  if (std::memcmp(magic.data(), kMagic.data(), kMagic.size()) != 0) {
    throw ParseError(path.string() + ": not a checkpoint file");
  }
  if (r.get<std::uint32_t>() != kVersion) throw ParseError(path.string() + ": unsupported checkpoint version");
  Checkpoint c;
  c.config_hash = r.get<std::uint64_t>();
  c.epoch = r.get<std::int64_t>();
  c.params.adam.step = r.get<std::int64_t>();
  if (r.get<std::uint32_t>() != ParamSet::kCount) throw ParseError(path.string() + ": unexpected tensor count");
  auto vals = c.params.weights.tensors();
  auto m1 = c.params.adam.first_moment.tensors();
  auto m2 = c.params.adam.second_moment.tensors();
  for (std::size_t i = 0; i < ParamSet::kCount; ++i) {
    if (r.get_string() != ParamSet::kNames[i]) throw ParseError(path.string() + ": unexpected tensor name");
    const auto rows = static_cast<Eigen::Index>(r.get<std::uint64_t>());
    const auto cols = static_cast<Eigen::Index>(r.get<std::uint64_t>());
    *vals[i] = get_matrix_f32(r, rows, cols);
    *m1[i] = get_matrix_f32(r, rows, cols);
    *m2[i] = get_matrix_f32(r, rows, cols);
  }
  if (r.remaining() != 0) throw ParseError(path.string() + ": trailing bytes in checkpoint");
  return c;
}

}  // namespace e2neg
