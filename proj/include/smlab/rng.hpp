#pragma once

#include <cstdint>
#include <limits>

namespace smlab {

/// Deterministic pseudo-random stream keyed by (master seed, stream index).
///
/// The generator state is derived from the key with a counter-based mix, so
/// the same key reproduces the same draws regardless of how streams are
/// scheduled across threads. The engine is xoshiro256**; gaussians use the
/// Box-Muller transform on top of it so draw sequences do not depend on the
/// standard library's distribution implementations.
///
/// A stream is not safe to share between threads; give each task its own
/// stream via `substream`.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Standard normal.
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Independent stream for the child key `purpose`. Depends only on this
  /// stream's key, never on how many draws were already taken.
  RngStream substream(std::uint64_t purpose) const;

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::uint64_t s_[4];
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Stateless 64-bit mixer (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

/// Combine two keys into one stream index.
std::uint64_t combine_keys(std::uint64_t a, std::uint64_t b);

}  // namespace smlab
