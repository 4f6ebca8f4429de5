#pragma once

#include <cstdint>
#include <random>

namespace cusign {

// splitmix64 finalizer; used to derive decorrelated substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic generator with a fixed, documented pipeline so equal seeds
// give equal streams on every platform:
//   engine   : std::mt19937_64 (output sequence fixed by the C++ standard)
//   uniform  : (x >> 11) * 2^-53           -> [0, 1)
//   normal   : Marsaglia polar with cached spare deviate
// std::normal_distribution is deliberately avoided: its algorithm is
// implementation-defined and would break cross-platform reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return gen_(); }

  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double normal();

  // Sum of `dof` squared standard normals.
  double chi_square(int dof);

  // Child generator for logical substream `stream`, derived from the original
  // seed (not the current engine state), so shard layouts are reproducible
  // regardless of what the parent has already consumed.
  Rng spawn(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ splitmix64(0x9E3779B97F4A7C15ULL * (stream + 1))));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cusign
