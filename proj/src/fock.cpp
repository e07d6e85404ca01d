#include "dualopa/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "dualopa/error.hpp"

namespace dualopa {

namespace {

void check_cutoff(int cutoff) {
  if (cutoff < 0) throw Error(ErrorKind::CutoffViolation, fmt::format("negative cutoff {}", cutoff));
}

void check_key(const Occupation& occ, std::size_t mode_count, int cutoff) {
  if (occ.size() != mode_count) {
    throw Error(ErrorKind::ShapeMismatch,
                fmt::format("occupation {} has {} modes, expected {}", to_string(occ), occ.size(),
                            mode_count));
  }
  for (int n : occ.counts) {
    if (n < 0) throw Error(ErrorKind::DomainError, fmt::format("negative count in {}", to_string(occ)));
    if (n > cutoff) {
      throw Error(ErrorKind::CutoffViolation,
                  fmt::format("count {} in {} exceeds cutoff {}", n, to_string(occ), cutoff));
    }
  }
}

void check_same_shape(const State& a, const State& b) {
  if (a.mode_count() != b.mode_count() || a.cutoff() != b.cutoff()) {
    throw Error(ErrorKind::ShapeMismatch,
                fmt::format("states differ in shape: {} modes/cutoff {} vs {} modes/cutoff {}",
                            a.mode_count(), a.cutoff(), b.mode_count(), b.cutoff()));
  }
}

}  // namespace

int Occupation::total() const noexcept { return std::accumulate(counts.begin(), counts.end(), 0); }

std::string to_string(const Occupation& occ) { return fmt::format("|{}>", fmt::join(occ.counts, ",")); }

State::State(std::size_t mode_count, int cutoff) : mode_count_(mode_count), cutoff_(cutoff) {
  if (mode_count == 0) throw Error(ErrorKind::ShapeMismatch, "a state needs at least one mode");
  check_cutoff(cutoff);
}

State::State(std::size_t mode_count, int cutoff, Terms terms) : State(mode_count, cutoff) {
  for (auto it = terms.begin(); it != terms.end();) {
    check_key(it->first, mode_count_, cutoff_);
    if (!std::isfinite(it->second.real()) || !std::isfinite(it->second.imag())) {
      throw Error(ErrorKind::DomainError, fmt::format("non-finite amplitude on {}", to_string(it->first)));
    }
    if (std::abs(it->second) < kDropThreshold) {
      it = terms.erase(it);
    } else {
      ++it;
    }
  }
  terms_ = std::move(terms);
}

Amplitude State::amplitude(const Occupation& occ) const {
  auto it = terms_.find(occ);
  return it == terms_.end() ? Amplitude{} : it->second;
}

double State::norm_squared() const {
  double sum = 0.0;
  for (const auto& [occ, amp] : terms_) sum += std::norm(amp);
  return sum;
}

double State::norm() const { return std::sqrt(norm_squared()); }

bool State::is_normalized() const { return std::abs(norm_squared() - 1.0) <= kNormalizedTolerance; }

State State::scaled(Amplitude factor) const {
  Terms out;
  for (const auto& [occ, amp] : terms_) out.emplace_hint(out.end(), occ, amp * factor);
  return State(mode_count_, cutoff_, std::move(out));
}

StateBuilder::StateBuilder(std::size_t mode_count, int cutoff)
    : mode_count_(mode_count), cutoff_(cutoff) {}

bool StateBuilder::add(const Occupation& occ, Amplitude amp) {
  if (std::any_of(occ.counts.begin(), occ.counts.end(), [&](int n) { return n > cutoff_; })) {
    return false;
  }
  terms_[occ] += amp;
  return true;
}

State StateBuilder::build() && { return State(mode_count_, cutoff_, std::move(terms_)); }

State make_basis_state(const Occupation& occ, int cutoff) {
  check_cutoff(cutoff);
  check_key(occ, occ.size(), cutoff);
  return State(occ.size(), cutoff, {{occ, Amplitude{1.0, 0.0}}});
}

State superpose(std::span<const std::pair<Amplitude, State>> parts) {
  if (parts.empty()) throw Error(ErrorKind::ShapeMismatch, "superpose needs at least one part");
  const State& first = parts.front().second;
  StateBuilder builder(first.mode_count(), first.cutoff());
  for (const auto& [coeff, part] : parts) {
    check_same_shape(first, part);
    for (const auto& [occ, amp] : part.terms()) builder.add(occ, coeff * amp);
  }
  return std::move(builder).build();
}

State superpose(std::initializer_list<std::pair<Amplitude, State>> parts) {
  return superpose(std::span<const std::pair<Amplitude, State>>(parts.begin(), parts.size()));
}

Normalized normalize(const State& state) {
  const double norm = state.norm();
  if (norm == 0.0) throw Error(ErrorKind::ZeroState, "cannot normalize the zero vector");
  return {state.scaled(1.0 / norm), NormReport{norm, 0.0}};
}

Amplitude inner_product(const State& lhs, const State& rhs) {
  if (lhs.mode_count() != rhs.mode_count()) {
    throw Error(ErrorKind::ShapeMismatch,
                fmt::format("inner product of {}-mode and {}-mode states", lhs.mode_count(),
                            rhs.mode_count()));
  }
  // Merge walk over the two sorted maps.
  Amplitude sum{};
  auto a = lhs.terms().begin();
  auto b = rhs.terms().begin();
  while (a != lhs.terms().end() && b != rhs.terms().end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      sum += std::conj(a->second) * b->second;
      ++a;
      ++b;
    }
  }
  return sum;
}

State tensor(const State& first, const State& second) {
  if (first.cutoff() != second.cutoff()) {
    throw Error(ErrorKind::ShapeMismatch, fmt::format("tensor of states with cutoffs {} and {}",
                                                      first.cutoff(), second.cutoff()));
  }
  State::Terms out;
  for (const auto& [occ_a, amp_a] : first.terms()) {
    for (const auto& [occ_b, amp_b] : second.terms()) {
      Occupation joined = occ_a;
      joined.counts.insert(joined.counts.end(), occ_b.counts.begin(), occ_b.counts.end());
      out.emplace_hint(out.end(), std::move(joined), amp_a * amp_b);
    }
  }
  return State(first.mode_count() + second.mode_count(), first.cutoff(), std::move(out));
}

Projection project_modes(const State& state, std::span<const std::size_t> modes,
                         std::span<const int> counts) {
  if (modes.size() != counts.size()) {
    throw Error(ErrorKind::ShapeMismatch,
                fmt::format("{} modes but {} counts", modes.size(), counts.size()));
  }
  std::vector<bool> measured(state.mode_count(), false);
  for (std::size_t m : modes) {
    if (m >= state.mode_count()) {
      throw Error(ErrorKind::ShapeMismatch,
                  fmt::format("mode {} out of range for {}-mode state", m, state.mode_count()));
    }
    if (measured[m]) throw Error(ErrorKind::ShapeMismatch, fmt::format("mode {} listed twice", m));
    measured[m] = true;
  }
  const std::size_t remaining = state.mode_count() - modes.size();
  if (remaining == 0) throw Error(ErrorKind::ShapeMismatch, "projection must leave at least one mode");

  State::Terms kept;
  for (const auto& [occ, amp] : state.terms()) {
    bool match = true;
    for (std::size_t i = 0; i < modes.size() && match; ++i) match = occ[modes[i]] == counts[i];
    if (!match) continue;
    Occupation reduced;
    reduced.counts.reserve(remaining);
    for (std::size_t k = 0; k < occ.size(); ++k) {
      if (!measured[k]) reduced.counts.push_back(occ[k]);
    }
    // Lexicographic order of the reduced keys follows from the full keys
    // only when measured modes are fixed, which they are here.
    kept.emplace_hint(kept.end(), std::move(reduced), amp);
  }
  State reduced_state(remaining, state.cutoff(), std::move(kept));
  const double probability = reduced_state.norm_squared();
  if (probability == 0.0) return {std::move(reduced_state), 0.0};
  return {reduced_state.scaled(1.0 / std::sqrt(probability)), probability};
}

double fidelity(const State& lhs, const State& rhs) {
  if (!lhs.is_normalized() || !rhs.is_normalized()) {
    throw Error(ErrorKind::NotNormalized,
                fmt::format("fidelity needs normalized states (norms^2 {} and {})", lhs.norm_squared(),
                            rhs.norm_squared()));
  }
  return std::min(1.0, std::norm(inner_product(lhs, rhs)));
}

}  // namespace dualopa
