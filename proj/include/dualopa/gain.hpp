#pragma once

#include <span>
#include <vector>

#include "dualopa/herald.hpp"

namespace dualopa {

/// Rate at which the linear-optics scheme produces the N=4 N00N state.
inline constexpr double kLinearOpticsRate = 3.0 / 64.0;

struct GainSearchConfig {
  HeraldOutcome objective{1, 1};
  double r_min = 0.01;
  double r_max = 2.0;
  /// Final bracket width.
  double tolerance = 1e-6;
};

struct GainOptimum {
  double r_star = 0.0;
  double p_star = 0.0;
  int iterations = 0;
  /// Set when the maximum sits on a bracket endpoint; the objective is then
  /// probably monotone over the bracket.
  bool bracket_warning = false;
};

/// Golden-section maximization of Prob(n, m) over r. For (n, m) != (0, 0)
/// the objective is const * x^{n+m} (1-x)^4 with x = tanh^2 r, which is
/// unimodal with its peak at x = (n+m)/(n+m+4).
GainOptimum optimize_gain(const GainSearchConfig& cfg);

struct SweepSeries {
  HeraldOutcome objective;
  std::vector<double> r_values;
  std::vector<double> prob_values;
};

SweepSeries sweep_gain(HeraldOutcome objective, std::span<const double> r_values);

struct LinearOpticsComparison {
  double dual_opa_rate = 0.0;
  double linear_rate = kLinearOpticsRate;
  double ratio = 0.0;
};

/// Prob(1,1) at `r` against the fixed 3/64 linear-optics rate. The ratio
/// peaks at 1024/729 (about 1.40) at the optimal gain.
LinearOpticsComparison linear_optics_comparison(double r);

}  // namespace dualopa
