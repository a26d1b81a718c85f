#pragma once

#include <cstdint>
#include <random>

namespace e2neg {

using Rng = std::mt19937_64;

// Independent random streams derived from one root seed. Each pipeline stage
// draws from its own stream so that changing, say, the number of probe seeds
// never perturbs center selection or augmentation.
enum class Stage : std::uint64_t {
  kPreprocess = 1,
  kAugment = 2,
  kInit = 3,
  kProbe = 4,
  kSampling = 5,
  kSynthetic = 6,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Counter-based split: the same (root, stage, counter) always yields the same
// seed, and distinct triples yield decorrelated seeds.
std::uint64_t derive_seed(std::uint64_t root, Stage stage, std::uint64_t counter = 0) noexcept;

inline Rng make_rng(std::uint64_t root, Stage stage, std::uint64_t counter = 0) {
  return Rng(derive_seed(root, stage, counter));
}

}  // namespace e2neg
