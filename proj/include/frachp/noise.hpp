#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "frachp/core.hpp"

namespace frachp {

/// Bumped whenever any constant below changes the produced streams.
inline constexpr int kNoiseStreamVersion = 1;

/// SplitMix64 finalizer (Stafford "Mix13").
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based stream: draw i of stream `seed` is a pure function of
/// (seed, i), so any draw can be regenerated without replaying the others.
///
///   key      = mix64(seed ^ 0x6A09E667F3BCC909)
///   bits(i)  = mix64(key + (i + 1) * 0x9E3779B97F4A7C15)
///   uniform  = ((bits >> 11) + 0.5) * 2^-53          in (0, 1)
///   normal   = AS241 inverse normal CDF of uniform   (one uniform per draw)
class CounterStream {
 public:
  explicit CounterStream(std::uint64_t seed) noexcept;

  std::uint64_t bits(std::uint64_t index) const noexcept;
  double uniform(std::uint64_t index) const noexcept;
  double normal(std::uint64_t index) const noexcept;

 private:
  std::uint64_t key_;
};

/// Wichura's AS241 (PPND16) rational approximation; about 1e-16 relative.
double inverse_normal_cdf(double u) noexcept;

/// Child seed for ensemble member `index`.
std::uint64_t spawn_substream(std::uint64_t seed, std::uint64_t index) noexcept;

/// N x m table of Brownian increments G_a(k) = W^a((k+1)h) - W^a(kh),
/// stored row-major (time-major).
class WienerPath {
 public:
  WienerPath(double h, std::size_t n_steps, std::size_t channels, std::vector<double> increments,
             std::uint64_t seed);

  double h() const noexcept { return h_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t channels() const noexcept { return channels_; }
  std::uint64_t seed() const noexcept { return seed_; }

  double increment(std::size_t k, std::size_t a) const { return increments_[k * channels_ + a]; }
  std::span<const double> row(std::size_t k) const {
    return {increments_.data() + k * channels_, channels_};
  }
  const std::vector<double>& increments() const noexcept { return increments_; }

  /// W^a(N h), summed pairwise.
  double terminal_value(std::size_t a) const;

 private:
  double h_;
  std::size_t n_steps_;
  std::size_t channels_;
  std::vector<double> increments_;
  std::uint64_t seed_;
};

/// Increment (k, a) is sqrt(h) * CounterStream(seed).normal(k*m + a).
WienerPath generate_path(std::uint64_t seed, double h, std::size_t n_steps, std::size_t channels);

/// The same Brownian path on a grid `factor` times coarser. Block sums use
/// pairwise summation, so coarsening by 2 twice equals coarsening by 4.
WienerPath coarsen(const WienerPath& path, std::size_t factor);

/// Sum with recursive halving; exact-order counterpart of coarsen().
double pairwise_sum(std::span<const double> values) noexcept;

/// CSV dump: header `step,s,G_1,...,G_m`, s = k*h + t_start.
void write_path_csv(std::ostream& out, const WienerPath& path, double t_start = 0.0);

}  // namespace frachp
