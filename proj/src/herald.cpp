#include "dualopa/herald.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "dualopa/error.hpp"
#include "ipow.hpp"

namespace dualopa {

namespace {

void check_gain(double r) {
  if (!std::isfinite(r) || r < 0.0) throw Error(ErrorKind::DomainError, fmt::format("gain r = {} must be >= 0", r));
}

}  // namespace

double herald_probability(int n, int m, double r) {
  if (n < 0 || m < 0) throw Error(ErrorKind::DomainError, fmt::format("negative outcome ({}, {})", n, m));
  check_gain(r);
  const double c = closed_form_prefactor(r);
  const double x = std::tanh(r) * std::tanh(r);
  const double weight = static_cast<double>((n + 1) * (n + 2) + (m + 1) * (m + 2));
  return c * c * std::pow(x, n + m) * weight;
}

double herald_probability(HeraldOutcome outcome, double r) { return herald_probability(outcome.n, outcome.m, r); }

double diagonal_herald_mass(double r) {
  check_gain(r);
  const double t2 = std::tanh(r) * std::tanh(r);
  return std::pow(std::cosh(r), -8.0) / std::pow(1.0 - t2 * t2, 3.0);
}

double HeraldDistribution::at(int n, int m) const {
  if (n < 0 || m < 0 || n > n_max || m > n_max) {
    throw Error(ErrorKind::ShapeMismatch, fmt::format("({}, {}) outside table of size {}", n, m, n_max));
  }
  return probs[static_cast<std::size_t>(n) * static_cast<std::size_t>(n_max + 1) + static_cast<std::size_t>(m)];
}

double HeraldDistribution::table_sum() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

HeraldOutcome HeraldDistribution::argmax() const {
  // First maximum in row-major order.
  const auto it = std::max_element(probs.begin(), probs.end());
  const auto k = static_cast<int>(std::distance(probs.begin(), it));
  return {k / (n_max + 1), k % (n_max + 1)};
}

HeraldOutcome HeraldDistribution::argmax_diagonal() const {
  int best = 0;
  for (int n = 1; n <= n_max; ++n) {
    if (at(n, n) > at(best, best)) best = n;
  }
  return {best, best};
}

HeraldDistribution herald_distribution(double r, int n_max) {
  if (n_max < 0) throw Error(ErrorKind::DomainError, fmt::format("n_max = {} is negative", n_max));
  HeraldDistribution dist;
  dist.r = r;
  dist.n_max = n_max;
  dist.probs.reserve(static_cast<std::size_t>(n_max + 1) * static_cast<std::size_t>(n_max + 1));
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= n_max; ++m) dist.probs.push_back(herald_probability(n, m, r));
  }
  dist.tail_mass = std::max(0.0, 1.0 - dist.table_sum());
  return dist;
}

HeraldedState heralded_state(int n, int m, const SchemeParams& params) {
  if (n < 0 || m < 0) throw Error(ErrorKind::DomainError, fmt::format("negative outcome ({}, {})", n, m));
  if (n + 2 > params.cutoff || m + 2 > params.cutoff) {
    throw Error(ErrorKind::CutoffViolation,
                fmt::format("herald ({}, {}) needs cutoff >= {}, got {}", n, m, std::max(n, m) + 2, params.cutoff));
  }
  const double kn = kappa(n);
  const double km = kappa(m);
  const double norm = std::sqrt(kn * kn + km * km);
  const Amplitude phase = detail::ipow(-std::polar(1.0, params.squeeze.phi()), n + m);

  StateBuilder builder(2, params.cutoff);
  builder.add({n + 2, m}, phase * kn / norm);
  builder.add({n, m + 2}, phase * km / norm);
  return {{n, m}, std::move(builder).build(), herald_probability(n, m, params.squeeze.r())};
}

State noon_convert(const HeraldedState& hs, const BeamSplitterParams& bs) {
  return apply_beam_splitter(hs.state, 0, 1, bs).state;
}

State noon_convert(const HeraldedState& hs, double theta) {
  return noon_convert(hs, BeamSplitterParams{theta, BeamSplitterConvention::Eq9});
}

NoonFidelity noon_fidelity(const State& state, int photons) {
  if (photons < 1) throw Error(ErrorKind::DomainError, fmt::format("N00N order {} must be >= 1", photons));
  if (state.mode_count() != 2) {
    throw Error(ErrorKind::ShapeMismatch, fmt::format("N00N fidelity needs 2 modes, got {}", state.mode_count()));
  }
  if (!state.is_normalized()) {
    throw Error(ErrorKind::NotNormalized, fmt::format("state has norm^2 {}", state.norm_squared()));
  }
  // |<N00N(chi)|psi>|^2 = |alpha + e^{-i chi} beta|^2 / 2, maximal when the
  // two contributions are in phase.
  const Amplitude alpha = state.amplitude({photons, 0});
  const Amplitude beta = state.amplitude({0, photons});
  NoonFidelity out;
  out.best_fidelity = std::min(1.0, 0.5 * std::pow(std::abs(alpha) + std::abs(beta), 2));
  if (alpha != Amplitude{} && beta != Amplitude{}) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double chi = std::fmod(std::arg(beta) - std::arg(alpha), two_pi);
    if (chi < 0.0) chi += two_pi;
    out.best_phase = chi;
  }
  return out;
}

std::vector<double> fringe_pattern(int photons, std::span<const double> phi_grid) {
  if (photons < 1) throw Error(ErrorKind::DomainError, fmt::format("fringe order {} must be >= 1", photons));
  std::vector<double> out;
  out.reserve(phi_grid.size());
  for (double phi : phi_grid) out.push_back(1.0 + std::cos(photons * phi));
  return out;
}

}  // namespace dualopa
