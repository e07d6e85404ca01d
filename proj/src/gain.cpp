#include "dualopa/gain.hpp"

#include <cmath>

#include <fmt/format.h>

#include "dualopa/error.hpp"

namespace dualopa {

GainOptimum optimize_gain(const GainSearchConfig& cfg) {
  if (!(cfg.tolerance > 0.0)) throw Error(ErrorKind::DomainError, "tolerance must be positive");
  if (!(cfg.r_min >= 0.0 && cfg.r_min < cfg.r_max)) {
    throw Error(ErrorKind::DomainError,
                fmt::format("bracket [{}, {}] must satisfy 0 <= r_min < r_max", cfg.r_min, cfg.r_max));
  }
  auto f = [&](double r) { return herald_probability(cfg.objective, r); };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = cfg.r_min;
  double hi = cfg.r_max;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  int iterations = 0;
  while (hi - lo > cfg.tolerance) {
    ++iterations;
    if (f1 >= f2) {  // ties shrink toward smaller r
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }

  GainOptimum out;
  out.iterations = iterations;
  out.r_star = 0.5 * (lo + hi);
  out.p_star = f(out.r_star);
  // A maximum within one tolerance of an edge is reported at the edge.
  for (double edge : {cfg.r_min, cfg.r_max}) {
    if (std::abs(out.r_star - edge) <= cfg.tolerance && f(edge) >= out.p_star) {
      out.r_star = edge;
      out.p_star = f(edge);
      out.bracket_warning = true;
    }
  }
  return out;
}

SweepSeries sweep_gain(HeraldOutcome objective, std::span<const double> r_values) {
  SweepSeries out{objective, {r_values.begin(), r_values.end()}, {}};
  out.prob_values.reserve(r_values.size());
  for (double r : r_values) out.prob_values.push_back(herald_probability(objective, r));
  return out;
}

LinearOpticsComparison linear_optics_comparison(double r) {
  LinearOpticsComparison out;
  out.dual_opa_rate = herald_probability(1, 1, r);
  out.ratio = out.dual_opa_rate / out.linear_rate;
  return out;
}

}  // namespace dualopa
