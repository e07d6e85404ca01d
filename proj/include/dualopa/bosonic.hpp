#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "dualopa/fock.hpp"

namespace dualopa {

/// Complex squeezing parameter xi = r * exp(i phi).
class SqueezeParams {
 public:
  /// Gain above which photon-number tails get heavy enough that cutoffs
  /// should be checked by hand.
  static constexpr double kHeavyTailGain = 1.5;

  /// Throws DomainError for r < 0 or non-finite input. `phi` is wrapped
  /// into [0, 2pi).
  SqueezeParams(double r, double phi = 0.0);

  double r() const noexcept { return r_; }
  double phi() const noexcept { return phi_; }
  Amplitude xi() const;
  bool heavy_tail() const noexcept { return r_ > kHeavyTailGain; }

 private:
  double r_;
  double phi_;
};

enum class BeamSplitterConvention {
  /// a+ -> (a+ + i b+)/sqrt2, b+ -> (i a+ + b+)/sqrt2; theta is ignored.
  HomI,
  /// b+ -> (b+ + e^{i theta} c+)/sqrt2, c+ -> (b+ - e^{i theta} c+)/sqrt2.
  Eq9,
};

struct BeamSplitterParams {
  double theta = 0.0;
  BeamSplitterConvention convention = BeamSplitterConvention::Eq9;
};

/// Result of an operator application: the (unrenormalized) output and the
/// norm bookkeeping. `report.norm_before` is the output norm and
/// `report.leakage` the squared-norm lost past the cutoff.
struct Evolved {
  State state;
  NormReport report;
};

Evolved apply_create(const State& state, std::size_t mode);
Evolved apply_annihilate(const State& state, std::size_t mode);

/// S(xi) = exp(-xi a+ b+ + xi* ab) on modes (mode_a, mode_b), applied via
/// the normal-ordered factorization
///   exp(-tau a+ b+) exp(-ln(cosh r)(a+a + b+b + 1)) exp(tau* ab),
/// tau = e^{i phi} tanh r. Every factor is a finite sum on a truncated
/// state, so the result is the exact output projected onto the cutoff.
Evolved apply_two_mode_squeeze(const State& state, std::size_t mode_a, std::size_t mode_b,
                               const SqueezeParams& p);

/// Two-mode squeezed vacuum sum_n (-1)^n e^{in phi} tanh^n r / cosh r |n,n>,
/// n <= cutoff.
State squeeze_vacuum_analytic(const SqueezeParams& p, int cutoff);

Evolved apply_beam_splitter(const State& state, std::size_t mode_a, std::size_t mode_b,
                            const BeamSplitterParams& p);

/// Largest per-mode cutoff accepted by the dense oracle.
inline constexpr int kOracleMaxCutoff = 96;
/// Largest two-mode cutoff for which the full dense unitary is assembled.
inline constexpr int kDenseUnitaryMaxCutoff = 48;

/// exp(m) by scaling and squaring with a Taylor kernel.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m);

/// Dense generator -xi a+ b+ + xi* ab on the truncated two-mode space.
/// Basis index of |p,q> is p * (cutoff + 1) + q.
Eigen::MatrixXcd squeeze_generator_dense(int cutoff, const SqueezeParams& p);

/// exp of the truncated generator, assembled block by block over the
/// connected components of the generator's sparsity pattern.
Eigen::MatrixXcd squeeze_unitary_dense(int cutoff, const SqueezeParams& p);

/// Independent check of apply_two_mode_squeeze: exponentiates the truncated
/// generator densely and applies it. Differs from the factored path only
/// near the cutoff, where the truncated generator is no longer exact.
State matrix_exponential_oracle(const State& state, std::size_t mode_a, std::size_t mode_b,
                                const SqueezeParams& p);

}  // namespace dualopa
