#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

namespace pballs {

/// Counter-based random stream: Philox4x32-10 keyed by the 64-bit master
/// seed, with the 128-bit counter split into (block index, stream index).
/// Distinct (seed, stream) pairs give independent sequences; identical
/// pairs reproduce identical draws bit-exactly regardless of thread count.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_index)
      : seed_(seed), stream_(stream_index) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }

  /// A sibling stream under the same master seed.
  RandomStream sibling(std::uint64_t stream_index) const {
    return RandomStream(seed_, stream_index);
  }

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double next_double();

  /// Uniform on the open interval (0, 1); safe under log().
  double next_open();

  /// Standard normal via Box-Muller (trig form, pair-cached).
  double next_normal();

  /// Gamma(shape, scale) via Marsaglia-Tsang, with the shape < 1 boost.
  double next_gamma(double shape, double scale);

  /// Chi distribution with (possibly non-integer) dof degrees of freedom.
  double next_chi(double dof) { return std::sqrt(next_gamma(0.5 * dof, 2.0)); }

  std::string describe() const {
    return "seed=" + std::to_string(seed_) + " stream=" + std::to_string(stream_);
  }

 private:
  std::array<std::uint32_t, 4> block(std::uint64_t counter) const;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;  // consumed
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

namespace detail {
/// Raw Philox4x32-10 block function (exposed for known-answer tests).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);
}  // namespace detail

}  // namespace pballs
