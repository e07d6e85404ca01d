#pragma once

#include <span>
#include <vector>

#include "dualopa/bosonic.hpp"
#include "dualopa/fock.hpp"
#include "dualopa/scheme.hpp"

namespace dualopa {

/// Photon numbers seen by the detectors on modes A (n) and D (m).
struct HeraldOutcome {
  int n = 0;
  int m = 0;

  bool diagonal() const noexcept { return n == m; }
  auto operator<=>(const HeraldOutcome&) const = default;
};

/// Prob(n, m) = C(r)^2 tanh^{2(n+m)}(r) [(n+1)(n+2) + (m+1)(m+2)].
/// Sums to exactly 1 over all n, m >= 0.
double herald_probability(int n, int m, double r);
double herald_probability(HeraldOutcome outcome, double r);

/// Sum over n of Prob(n, n): cosh^-8(r) / (1 - tanh^4 r)^3.
double diagonal_herald_mass(double r);

struct HeraldDistribution {
  double r = 0.0;
  int n_max = 0;
  /// Row-major over (n, m), 0 <= n, m <= n_max.
  std::vector<double> probs;
  /// 1 - sum(probs); mass on outcomes outside the table.
  double tail_mass = 0.0;

  double at(int n, int m) const;
  double table_sum() const;
  HeraldOutcome argmax() const;
  HeraldOutcome argmax_diagonal() const;
};

HeraldDistribution herald_distribution(double r, int n_max);

struct HeraldedState {
  HeraldOutcome outcome;
  /// Modes B and C.
  State state;
  double probability = 0.0;
};

/// Normalized B,C state after detecting (n, m):
///   (-e^{i phi})^{n+m} [kappa(n)|n+2, m> + kappa(m)|n, m+2>] / sqrt(kappa(n)^2 + kappa(m)^2),
/// i.e. exactly what projecting the closed-form output onto (n, m) yields.
/// For n != m the two components are not equally weighted.
HeraldedState heralded_state(int n, int m, const SchemeParams& params);

/// Mixes the heralded B,C modes on a 50:50 beam splitter.
State noon_convert(const HeraldedState& hs, const BeamSplitterParams& bs);
/// Eq9-convention splitter with relative phase `theta`.
State noon_convert(const HeraldedState& hs, double theta);

struct NoonFidelity {
  double best_fidelity = 0.0;
  /// chi in [0, 2pi) maximizing overlap with (|N,0> + e^{i chi}|0,N>)/sqrt2;
  /// 0 when either component is absent and chi is arbitrary.
  double best_phase = 0.0;
};

NoonFidelity noon_fidelity(const State& state, int photons);

/// 1 + cos(N phi) at every grid point.
std::vector<double> fringe_pattern(int photons, std::span<const double> phi_grid);

}  // namespace dualopa
