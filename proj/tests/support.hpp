#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include "dualopa/fock.hpp"

namespace dualopa::testing {

/// Random normalized state on `modes` modes whose terms have at most
/// `max_photons` photons in total. Terms are drawn with complex Gaussian
/// amplitudes.
inline State random_state(std::mt19937_64& gen, std::size_t modes, int max_photons, int cutoff, int max_terms = 6) {
  std::uniform_int_distribution<int> count(0, max_photons);
  std::uniform_int_distribution<int> n_terms(1, max_terms);
  std::normal_distribution<double> gauss(0.0, 1.0);
  StateBuilder builder(modes, cutoff);
  const int terms = n_terms(gen);
  for (int t = 0; t < terms; ++t) {
    Occupation occ;
    int budget = max_photons;
    for (std::size_t k = 0; k < modes; ++k) {
      std::uniform_int_distribution<int> pick(0, budget);
      occ.counts.push_back(pick(gen));
      budget -= occ.counts.back();
    }
    builder.add(occ, {gauss(gen), gauss(gen)});
  }
  State s = std::move(builder).build();
  if (s.empty()) return make_basis_state(Occupation(std::vector<int>(modes, 0)), cutoff);
  return normalize(s).state;
}

/// Largest |a_k - b_k| over the union of supports.
inline double max_abs_diff(const State& a, const State& b) {
  double worst = 0.0;
  for (const auto& [occ, amp] : a.terms()) worst = std::max(worst, std::abs(amp - b.amplitude(occ)));
  for (const auto& [occ, amp] : b.terms()) worst = std::max(worst, std::abs(amp - a.amplitude(occ)));
  return worst;
}

}  // namespace dualopa::testing
