#pragma once

#include <cstddef>

#include "dualopa/bosonic.hpp"
#include "dualopa/fock.hpp"

namespace dualopa {

/// Mode order of the four-mode scheme. The entangled seed enters B and C,
/// A and D start in vacuum and carry the herald detectors.
enum class Mode : std::size_t { A = 0, B = 1, C = 2, D = 3 };

constexpr std::size_t index(Mode m) noexcept { return static_cast<std::size_t>(m); }

inline constexpr std::size_t kSchemeModes = 4;

/// Four-mode runs refuse cutoffs above this (ResourceLimit).
inline constexpr int kMaxSchemeCutoff = 200;

/// max(12, seed_photons + ceil(10 tanh(r) factor)).
int default_cutoff(double r, int seed_photons = 2, double cutoff_factor = 1.0);

/// Both amplifiers share one squeezing parameter.
struct SchemeParams {
  SqueezeParams squeeze;
  int cutoff = 14;
};

/// C(r) = cosh^-4(r) / 2.
double closed_form_prefactor(double r);
/// kappa(n) = sqrt((n+1)(n+2)).
double kappa(int n);

/// (|2,0> + |0,2>)/sqrt2 from a Hong-Ou-Mandel split of |1,1>, global phase removed.
State prepare_seed(int cutoff);

/// (|0,2,0,0> + |0,0,2,0>)/sqrt2 over modes A, B, C, D.
State input_state(const SchemeParams& params);

enum class SqueezeOrder { AbFirst, CdFirst };

/// Squeezes (A,B) and (C,D) of the input numerically. Leakage adds over
/// both applications.
Evolved run_scheme_numeric(const SchemeParams& params, SqueezeOrder order = SqueezeOrder::AbFirst);

/// Closed-form output
///   C(r) sum_{n,m} (-e^{i phi} tanh r)^{n+m} [kappa(n)|n,n+2,m,m> + kappa(m)|n,n,m+2,m>]
/// keeping every term whose photon numbers all fit under the cutoff.
State output_closed_form(const SchemeParams& params);

enum class Branch {
  /// |n, n+2, m, m>
  BExtra,
  /// |n, n, m+2, m>
  CExtra,
};

struct BranchAmplitude {
  int n = 0;
  int m = 0;
  Branch branch = Branch::BExtra;
  Amplitude value;

  Occupation occupation() const;
};

BranchAmplitude branch_amplitude(int n, int m, Branch branch, const SqueezeParams& squeeze);

}  // namespace dualopa
