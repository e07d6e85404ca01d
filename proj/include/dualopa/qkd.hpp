#pragma once

#include <cstdint>
#include <vector>

#include "dualopa/herald.hpp"
#include "dualopa/rng.hpp"

namespace dualopa {

/// Sampling refuses tables whose missing mass exceeds this.
inline constexpr double kMaxSamplingTail = 1e-6;

/// Inverse-CDF sampler over the herald table, renormalized over the table.
class HeraldSampler {
 public:
  /// Throws TruncationError when the table misses more than
  /// kMaxSamplingTail of the probability.
  HeraldSampler(double r, int n_max);

  HeraldOutcome sample(CounterRng& rng) const;
  const HeraldDistribution& distribution() const noexcept { return dist_; }

 private:
  HeraldDistribution dist_;
  std::vector<double> cdf_;
};

/// Smallest table size whose tail mass is at most kMaxSamplingTail.
int required_n_max(double r);

HeraldOutcome sample_herald(CounterRng& rng, double r, int n_max);

struct PairCounts {
  int alice = 0;
  int bob = 0;
};

/// Number measurement of the balanced diagonal herald
/// (|n+2, n> + |n, n+2>)/sqrt2; Alice holds mode B, Bob mode C.
PairCounts measure_heralded_pair(CounterRng& rng, int n);

struct QkdConfig {
  double r = 0.66;
  std::int64_t rounds = 10000;
  std::uint64_t rng_seed = 0;
  int n_max = 60;
  /// Worker threads; any value gives the same result.
  int threads = 1;
};

struct QkdStats {
  std::int64_t rounds = 0;
  std::int64_t sifted = 0;
  std::vector<std::uint8_t> key_alice;
  std::vector<std::uint8_t> key_bob;
  /// Fraction of matching key positions; 1 for an empty key.
  double agreement = 1.0;
  double sifted_fraction = 0.0;
  /// Sum of Prob(n, n) over the sampling table.
  double analytic_sifted_fraction = 0.0;

  bool operator==(const QkdStats&) const = default;
};

/// Each round draws a herald, discards n != m, and otherwise measures the
/// pair. The bit is 0 when Alice holds n+2 photons (Bob n) and 1 when Alice
/// holds n (Bob n+2); each party derives it from their own count and the
/// announced n. Round i uses stream i of the configured seed.
QkdStats run_protocol(const QkdConfig& cfg);

}  // namespace dualopa
