#pragma once

#include <cstdint>
#include <future>
#include <vector>

#include "cusign/errors.hpp"
#include "cusign/rng.hpp"

namespace cusign {

// Streaming mean/variance accumulator (Welford) with an exact parallel
// combine, so sharded runs reproduce the single-threaded result up to
// floating-point association of a fixed combine order.
struct Moments {
  long long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void combine(const Moments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(other.count);
    const double delta = other.mean - mean;
    const double total = na + nb;
    mean += delta * nb / total;
    m2 += other.m2 + delta * delta * na * nb / total;
    count += other.count;
  }

  // Population variance; sample_variance divides by (count - 1).
  double variance() const { return count > 0 ? m2 / static_cast<double>(count) : 0.0; }
  double sample_variance() const {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  }
};

// Number of logical shards used by every sharded Monte Carlo routine.  The
// shard count is fixed (not hardware-dependent) so results are reproducible
// across machines; only the wall time varies with available cores.
inline constexpr int kShards = 16;

// Splits `total` trials across kShards logical streams spawned from `rng`,
// runs `body(shard_rng, shard_trials)` for each (possibly concurrently), and
// folds the per-shard results with `fold(accum, shard_result)` in fixed shard
// order.  `Body` must be callable as R(Rng&, long long);  `fold` as
// void(R&, const R&).
template <typename R, typename Body, typename Fold>
R run_sharded(const Rng& rng, long long total, Body body, Fold fold) {
  if (total <= 0) throw InvalidArgumentError("run_sharded: total trials must be positive");
  const long long base = total / kShards;
  const long long extra = total % kShards;

  std::vector<std::future<R>> futures;
  futures.reserve(kShards);
  for (int shard = 0; shard < kShards; ++shard) {
    const long long trials = base + (shard < extra ? 1 : 0);
    futures.push_back(std::async(std::launch::async, [&rng, &body, shard, trials]() {
      Rng shard_rng = rng.spawn(static_cast<std::uint64_t>(shard));
      return body(shard_rng, trials);
    }));
  }

  R out{};
  for (int shard = 0; shard < kShards; ++shard) {
    R part = futures[static_cast<std::size_t>(shard)].get();
    fold(out, part);
  }
  return out;
}

}  // namespace cusign
