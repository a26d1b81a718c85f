#pragma once

#include <cstdint>
#include <filesystem>

#include "e2neg/encoder.hpp"

namespace e2neg {

// Checkpoint file layout, little-endian:
//
//   magic        4 bytes  "E2NC"
//   version      u32      1
//   config_hash  u64      FNV-1a of the canonical config text
//   epoch        i64      epochs completed
//   adam_step    i64
//   tensors      u32      count (5)
//   per tensor, in ParamSet::kNames order:
//     name       u64 length + bytes
//     rows, cols u64, u64
//     value      rows*cols float32, row-major
//     moment1    rows*cols float32
//     moment2    rows*cols float32
//   checksum     u64      FNV-1a of every preceding byte
//
// Values are narrowed to float32 on save; training itself runs in float64.
struct Checkpoint {
  std::uint64_t config_hash = 0;
  std::int64_t epoch = 0;
  EncoderParams params;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
// Throws ParseError on a bad magic, version, shape, or checksum.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace e2neg
