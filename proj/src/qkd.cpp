#include "dualopa/qkd.hpp"

#include <algorithm>
#include <thread>

#include <fmt/format.h>

#include "dualopa/error.hpp"

namespace dualopa {

namespace {

constexpr int kLargestTable = 2000;

struct RoundResult {
  bool kept = false;
  std::uint8_t alice_bit = 0;
  std::uint8_t bob_bit = 0;
};

RoundResult play_round(const HeraldSampler& sampler, std::uint64_t seed, std::uint64_t round) {
  CounterRng rng(seed, round);
  const HeraldOutcome herald = sampler.sample(rng);
  if (!herald.diagonal()) return {};
  const PairCounts counts = measure_heralded_pair(rng, herald.n);
  RoundResult out;
  out.kept = true;
  out.alice_bit = counts.alice == herald.n + 2 ? 0 : 1;
  out.bob_bit = counts.bob == herald.n ? 0 : 1;
  return out;
}

}  // namespace

HeraldSampler::HeraldSampler(double r, int n_max) : dist_(herald_distribution(r, n_max)) {
  if (dist_.tail_mass > kMaxSamplingTail) {
    throw Error(ErrorKind::TruncationError,
                fmt::format("herald table with n_max = {} misses {:.3g} of the probability at r = {}; "
                            "use n_max >= {}",
                            n_max, dist_.tail_mass, r, required_n_max(r)));
  }
  cdf_.reserve(dist_.probs.size());
  double running = 0.0;
  for (double p : dist_.probs) {
    running += p;
    cdf_.push_back(running);
  }
  // Fold the tail in proportionally.
  for (double& c : cdf_) c /= running;
  cdf_.back() = 1.0;
}

HeraldOutcome HeraldSampler::sample(CounterRng& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto k = static_cast<int>(std::distance(cdf_.begin(), std::min(it, cdf_.end() - 1)));
  return {k / (dist_.n_max + 1), k % (dist_.n_max + 1)};
}

int required_n_max(double r) {
  // Tail mass shrinks monotonically with n_max; bisect on it.
  int lo = 0;
  int hi = 1;
  while (herald_distribution(r, hi).tail_mass > kMaxSamplingTail) {
    lo = hi;
    hi *= 2;
    if (hi > kLargestTable) {
      throw Error(ErrorKind::ResourceLimit, fmt::format("no table up to {} covers r = {}", kLargestTable, r));
    }
  }
  if (herald_distribution(r, lo).tail_mass <= kMaxSamplingTail) return lo;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (herald_distribution(r, mid).tail_mass > kMaxSamplingTail ? lo : hi) = mid;
  }
  return hi;
}

HeraldOutcome sample_herald(CounterRng& rng, double r, int n_max) { return HeraldSampler(r, n_max).sample(rng); }

PairCounts measure_heralded_pair(CounterRng& rng, int n) {
  if (n < 0) throw Error(ErrorKind::DomainError, fmt::format("negative herald {}", n));
  // Both components of the balanced herald carry weight 1/2.
  if (rng.uniform() < 0.5) return {n + 2, n};
  return {n, n + 2};
}

QkdStats run_protocol(const QkdConfig& cfg) {
  if (cfg.rounds < 1) throw Error(ErrorKind::DomainError, fmt::format("rounds = {} must be >= 1", cfg.rounds));
  if (cfg.n_max < 2) throw Error(ErrorKind::DomainError, fmt::format("n_max = {} must be >= 2", cfg.n_max));
  const HeraldSampler sampler(cfg.r, cfg.n_max);

  const auto rounds = static_cast<std::size_t>(cfg.rounds);
  std::vector<RoundResult> results(rounds);
  const auto workers = static_cast<std::size_t>(std::clamp<std::int64_t>(cfg.threads, 1, cfg.rounds));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) results[i] = play_round(sampler, cfg.rng_seed, i);
  };
  if (workers == 1) {
    work(0, rounds);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, rounds * w / workers, rounds * (w + 1) / workers);
  }

  QkdStats stats;
  stats.rounds = cfg.rounds;
  std::int64_t matches = 0;
  for (const RoundResult& res : results) {
    if (!res.kept) continue;
    stats.key_alice.push_back(res.alice_bit);
    stats.key_bob.push_back(res.bob_bit);
    matches += res.alice_bit == res.bob_bit;
  }
  stats.sifted = static_cast<std::int64_t>(stats.key_alice.size());
  if (stats.sifted > 0) stats.agreement = static_cast<double>(matches) / static_cast<double>(stats.sifted);
  stats.sifted_fraction = static_cast<double>(stats.sifted) / static_cast<double>(stats.rounds);
  for (int n = 0; n <= cfg.n_max; ++n) stats.analytic_sifted_fraction += sampler.distribution().at(n, n);
  return stats;
}

}  // namespace dualopa
