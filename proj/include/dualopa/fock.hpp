#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dualopa {

using Amplitude = std::complex<double>;

/// Amplitudes with magnitude below this are never stored.
inline constexpr double kDropThreshold = 1e-14;

/// Tolerance on |<psi|psi> - 1| for a state to count as normalized.
inline constexpr double kNormalizedTolerance = 1e-10;

/// Photon counts per mode, |n_1, ..., n_k>. Ordered lexicographically.
struct Occupation {
  std::vector<int> counts;

  Occupation() = default;
  explicit Occupation(std::vector<int> c) : counts(std::move(c)) {}
  Occupation(std::initializer_list<int> c) : counts(c) {}

  std::size_t size() const noexcept { return counts.size(); }
  int operator[](std::size_t i) const { return counts[i]; }
  int& operator[](std::size_t i) { return counts[i]; }
  int total() const noexcept;

  auto operator<=>(const Occupation&) const = default;
  bool operator==(const Occupation&) const = default;
};

std::string to_string(const Occupation& occ);

struct NormReport {
  double norm_before = 0.0;
  /// probability mass lost to truncation, never negative
  double leakage = 0.0;
};

/// Pure state of `mode_count` bosonic modes, each truncated at `cutoff`
/// photons (inclusive). Terms are kept sparse and in lexicographic order.
class State {
 public:
  using Terms = std::map<Occupation, Amplitude>;

  /// The zero vector.
  State(std::size_t mode_count, int cutoff);
  /// Validates every key and drops negligible amplitudes.
  State(std::size_t mode_count, int cutoff, Terms terms);

  std::size_t mode_count() const noexcept { return mode_count_; }
  int cutoff() const noexcept { return cutoff_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  Amplitude amplitude(const Occupation& occ) const;
  double norm_squared() const;
  double norm() const;
  bool is_normalized() const;

  State scaled(Amplitude factor) const;

 private:
  std::size_t mode_count_;
  int cutoff_;
  Terms terms_;
};

/// Accumulates contributions term by term and produces a pruned State.
class StateBuilder {
 public:
  StateBuilder(std::size_t mode_count, int cutoff);

  /// Returns false (and records nothing) if `occ` exceeds the cutoff.
  bool add(const Occupation& occ, Amplitude amp);
  State build() &&;

 private:
  std::size_t mode_count_;
  int cutoff_;
  State::Terms terms_;
};

State make_basis_state(const Occupation& occ, int cutoff);

State superpose(std::span<const std::pair<Amplitude, State>> parts);
State superpose(std::initializer_list<std::pair<Amplitude, State>> parts);

struct Normalized {
  State state;
  NormReport report;
};

Normalized normalize(const State& state);

/// <lhs|rhs>, conjugate-linear in `lhs`.
Amplitude inner_product(const State& lhs, const State& rhs);

State tensor(const State& first, const State& second);

struct Projection {
  /// Normalized state of the unmeasured modes, or the zero vector when
  /// `probability` is 0.
  State state;
  double probability = 0.0;
};

/// Projects `modes` onto the photon numbers `counts` and traces them out.
Projection project_modes(const State& state, std::span<const std::size_t> modes,
                         std::span<const int> counts);

/// |<lhs|rhs>|^2 for normalized states.
double fidelity(const State& lhs, const State& rhs);

}  // namespace dualopa
