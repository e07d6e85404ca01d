#include "dualopa/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "dualopa/error.hpp"
#include "ipow.hpp"

namespace dualopa {

namespace {

void require_cutoff(int cutoff, int minimum, const char* what) {
  if (cutoff < minimum) {
    throw Error(ErrorKind::CutoffViolation,
                fmt::format("{} needs cutoff >= {}, got {}", what, minimum, cutoff));
  }
}

void require_tractable(int cutoff) {
  if (cutoff > kMaxSchemeCutoff) {
    throw Error(ErrorKind::ResourceLimit,
                fmt::format("cutoff {} exceeds the four-mode limit {}", cutoff, kMaxSchemeCutoff));
  }
}

}  // namespace

int default_cutoff(double r, int seed_photons, double cutoff_factor) {
  return std::max(12, seed_photons + static_cast<int>(std::ceil(10.0 * std::tanh(r) * cutoff_factor)));
}

double closed_form_prefactor(double r) { return 0.5 * std::pow(std::cosh(r), -4.0); }

double kappa(int n) { return std::sqrt(static_cast<double>((n + 1) * (n + 2))); }

State prepare_seed(int cutoff) {
  require_cutoff(cutoff, 2, "seed preparation");
  const State pair = make_basis_state({1, 1}, cutoff);
  const State split = apply_beam_splitter(pair, 0, 1, {0.0, BeamSplitterConvention::HomI}).state;

  // Take the seed real-positive: rotate by the phase of its first term.
  const Amplitude lead = split.terms().begin()->second;
  return split.scaled(std::conj(lead) / std::abs(lead));
}

State input_state(const SchemeParams& params) {
  require_cutoff(params.cutoff, 2, "input state");
  const State vacuum = make_basis_state({0}, params.cutoff);
  return tensor(tensor(vacuum, prepare_seed(params.cutoff)), vacuum);
}

Evolved run_scheme_numeric(const SchemeParams& params, SqueezeOrder order) {
  require_cutoff(params.cutoff, 4, "numeric scheme");
  require_tractable(params.cutoff);
  const State input = input_state(params);

  const std::size_t first[2] = {index(order == SqueezeOrder::AbFirst ? Mode::A : Mode::C),
                                index(order == SqueezeOrder::AbFirst ? Mode::B : Mode::D)};
  const std::size_t second[2] = {index(order == SqueezeOrder::AbFirst ? Mode::C : Mode::A),
                                 index(order == SqueezeOrder::AbFirst ? Mode::D : Mode::B)};

  Evolved once = apply_two_mode_squeeze(input, first[0], first[1], params.squeeze);
  Evolved twice = apply_two_mode_squeeze(once.state, second[0], second[1], params.squeeze);
  twice.report.leakage += once.report.leakage;
  return twice;
}

Occupation BranchAmplitude::occupation() const {
  if (branch == Branch::BExtra) return {n, n + 2, m, m};
  return {n, n, m + 2, m};
}

BranchAmplitude branch_amplitude(int n, int m, Branch branch, const SqueezeParams& squeeze) {
  if (n < 0 || m < 0) throw Error(ErrorKind::DomainError, fmt::format("negative index ({}, {})", n, m));
  const Amplitude ratio = -std::polar(std::tanh(squeeze.r()), squeeze.phi());
  const double weight = kappa(branch == Branch::BExtra ? n : m);
  return {n, m, branch, closed_form_prefactor(squeeze.r()) * weight * detail::ipow(ratio, n + m)};
}

State output_closed_form(const SchemeParams& params) {
  require_cutoff(params.cutoff, 4, "closed-form output");
  require_tractable(params.cutoff);
  const int cutoff = params.cutoff;
  StateBuilder builder(kSchemeModes, cutoff);
  for (int n = 0; n <= cutoff; ++n) {
    for (int m = 0; m <= cutoff; ++m) {
      for (Branch b : {Branch::BExtra, Branch::CExtra}) {
        const BranchAmplitude term = branch_amplitude(n, m, b, params.squeeze);
        builder.add(term.occupation(), term.value);  // rejected past the cutoff
      }
    }
  }
  return std::move(builder).build();
}

}  // namespace dualopa
