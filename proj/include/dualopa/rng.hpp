#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace dualopa {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Stateless: the same counter and key always give
/// the same four words.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

/// A stream of random numbers addressed by (seed, stream id). Distinct
/// stream ids give independent streams, so work split across threads by
/// stream id reproduces a serial run exactly.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  Philox4x32::Counter buffer_{};
  int buffered_ = 0;  // unread 64-bit halves in buffer_
};

}  // namespace dualopa
