#include "dualopa/bosonic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "dualopa/error.hpp"
#include "ipow.hpp"

namespace dualopa {

namespace {

constexpr Amplitude kI{0.0, 1.0};

void check_mode(const State& state, std::size_t mode) {
  if (mode >= state.mode_count()) {
    throw Error(ErrorKind::ShapeMismatch,
                fmt::format("mode {} out of range for {}-mode state", mode, state.mode_count()));
  }
}

void check_mode_pair(const State& state, std::size_t mode_a, std::size_t mode_b) {
  check_mode(state, mode_a);
  check_mode(state, mode_b);
  if (mode_a == mode_b) {
    throw Error(ErrorKind::ShapeMismatch, fmt::format("two-mode operation on mode {} twice", mode_a));
  }
}

Evolved finish(StateBuilder&& builder, double input_norm_sq) {
  State out = std::move(builder).build();
  const double out_norm_sq = out.norm_squared();
  return {std::move(out), NormReport{std::sqrt(out_norm_sq), std::max(0.0, input_norm_sq - out_norm_sq)}};
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double binomial(int n, int k) {
  return std::round(std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k)));
}

// Union-find over basis indices of the truncated two-mode space.
class Components {
 public:
  explicit Components(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void unite(std::size_t i, std::size_t j) { parent_[find(i)] = find(j); }

 private:
  std::vector<std::size_t> parent_;
};

struct GeneratorEntry {
  std::size_t row;
  Amplitude value;
};

// Nonzero entries of column |p,q> of -xi a+ b+ + xi* ab, truncated.
std::vector<GeneratorEntry> generator_column(int p, int q, int cutoff, Amplitude xi) {
  const auto dim = static_cast<std::size_t>(cutoff + 1);
  std::vector<GeneratorEntry> col;
  if (p + 1 <= cutoff && q + 1 <= cutoff) {
    col.push_back({static_cast<std::size_t>(p + 1) * dim + static_cast<std::size_t>(q + 1),
                   -xi * std::sqrt(static_cast<double>((p + 1) * (q + 1)))});
  }
  if (p > 0 && q > 0) {
    col.push_back({static_cast<std::size_t>(p - 1) * dim + static_cast<std::size_t>(q - 1),
                   std::conj(xi) * std::sqrt(static_cast<double>(p * q))});
  }
  return col;
}

struct Block {
  std::vector<std::size_t> basis;  // two-mode basis indices, ascending
  Eigen::MatrixXcd unitary;
};

// Exponentiates the truncated generator on every connected component that
// contains one of `seeds` (or on all components when `seeds` is empty).
std::vector<Block> exponentiate_blocks(int cutoff, const SqueezeParams& p,
                                       const std::vector<std::size_t>& seeds) {
  const auto dim = static_cast<std::size_t>(cutoff + 1);
  const std::size_t total = dim * dim;
  const Amplitude xi = p.xi();

  Components comps(total);
  for (std::size_t j = 0; j < total; ++j) {
    for (const auto& e : generator_column(static_cast<int>(j / dim), static_cast<int>(j % dim), cutoff, xi)) {
      comps.unite(e.row, j);
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> members;
  for (std::size_t j = 0; j < total; ++j) members[comps.find(j)].push_back(j);

  std::vector<std::size_t> roots;
  if (seeds.empty()) {
    for (const auto& [root, _] : members) roots.push_back(root);
  } else {
    for (std::size_t s : seeds) roots.push_back(comps.find(s));
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  }

  std::vector<Block> blocks;
  blocks.reserve(roots.size());
  for (std::size_t root : roots) {
    const auto& basis = members[root];
    std::map<std::size_t, Eigen::Index> local;
    for (std::size_t k = 0; k < basis.size(); ++k) local[basis[k]] = static_cast<Eigen::Index>(k);

    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      const std::size_t j = basis[static_cast<std::size_t>(c)];
      for (const auto& e : generator_column(static_cast<int>(j / dim), static_cast<int>(j % dim), cutoff, xi)) {
        gen(local.at(e.row), c) += e.value;
      }
    }
    blocks.push_back({basis, expm(gen)});
  }
  return blocks;
}

}  // namespace

SqueezeParams::SqueezeParams(double r, double phi) : r_(r), phi_(phi) {
  if (!std::isfinite(r) || !std::isfinite(phi)) {
    throw Error(ErrorKind::DomainError, "squeeze parameters must be finite");
  }
  if (r < 0.0) throw Error(ErrorKind::DomainError, fmt::format("gain r = {} is negative", r));
  constexpr double two_pi = 2.0 * std::numbers::pi;
  phi_ = std::fmod(phi, two_pi);
  if (phi_ < 0.0) phi_ += two_pi;
  if (phi_ >= two_pi) phi_ = 0.0;
}

Amplitude SqueezeParams::xi() const { return std::polar(r_, phi_); }

Evolved apply_create(const State& state, std::size_t mode) {
  check_mode(state, mode);
  StateBuilder builder(state.mode_count(), state.cutoff());
  for (const auto& [occ, amp] : state.terms()) {
    Occupation next = occ;
    next[mode] += 1;
    builder.add(next, amp * std::sqrt(static_cast<double>(next[mode])));
  }
  double in_sq = 0.0;
  for (const auto& [occ, amp] : state.terms()) in_sq += std::norm(amp) * (occ[mode] + 1);
  return finish(std::move(builder), in_sq);
}

Evolved apply_annihilate(const State& state, std::size_t mode) {
  check_mode(state, mode);
  StateBuilder builder(state.mode_count(), state.cutoff());
  double in_sq = 0.0;
  for (const auto& [occ, amp] : state.terms()) {
    if (occ[mode] == 0) continue;
    Occupation next = occ;
    next[mode] -= 1;
    builder.add(next, amp * std::sqrt(static_cast<double>(occ[mode])));
    in_sq += std::norm(amp) * occ[mode];
  }
  return finish(std::move(builder), in_sq);
}

Evolved apply_two_mode_squeeze(const State& state, std::size_t mode_a, std::size_t mode_b,
                               const SqueezeParams& p) {
  check_mode_pair(state, mode_a, mode_b);
  const int cutoff = state.cutoff();
  const Amplitude tau = std::polar(std::tanh(p.r()), p.phi());
  const double log_cosh = std::log(std::cosh(p.r()));

  // exp(tau* ab), then the diagonal factor; neither raises photon numbers.
  State::Terms lowered;
  for (const auto& [occ, amp] : state.terms()) {
    const int na = occ[mode_a];
    const int nb = occ[mode_b];
    Amplitude c = amp;
    for (int k = 0; k <= std::min(na, nb); ++k) {
      Occupation key = occ;
      key[mode_a] = na - k;
      key[mode_b] = nb - k;
      lowered[key] += c * std::exp(-log_cosh * (na - k + nb - k + 1));
      c *= std::conj(tau) * std::sqrt(static_cast<double>((na - k) * (nb - k))) / static_cast<double>(k + 1);
    }
  }

  // exp(-tau a+ b+), cut at the per-mode cutoff.
  StateBuilder builder(state.mode_count(), cutoff);
  for (const auto& [occ, amp] : lowered) {
    const int na = occ[mode_a];
    const int nb = occ[mode_b];
    Amplitude c = amp;
    Occupation key = occ;
    for (int j = 0; na + j <= cutoff && nb + j <= cutoff; ++j) {
      key[mode_a] = na + j;
      key[mode_b] = nb + j;
      builder.add(key, c);
      c *= -tau * std::sqrt(static_cast<double>((na + j + 1) * (nb + j + 1))) / static_cast<double>(j + 1);
    }
  }
  return finish(std::move(builder), state.norm_squared());
}

State squeeze_vacuum_analytic(const SqueezeParams& p, int cutoff) {
  if (cutoff < 0) throw Error(ErrorKind::CutoffViolation, fmt::format("negative cutoff {}", cutoff));
  const double t = std::tanh(p.r());
  StateBuilder builder(2, cutoff);
  for (int n = 0; n <= cutoff; ++n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    builder.add({n, n}, sign * std::polar(std::pow(t, n) / std::cosh(p.r()), n * p.phi()));
  }
  return std::move(builder).build();
}

Evolved apply_beam_splitter(const State& state, std::size_t mode_a, std::size_t mode_b,
                            const BeamSplitterParams& p) {
  check_mode_pair(state, mode_a, mode_b);
  const double s = std::numbers::sqrt2 / 2.0;
  // a+ -> u00 a+ + u01 b+,  b+ -> u10 a+ + u11 b+
  Amplitude u00, u01, u10, u11;
  switch (p.convention) {
    case BeamSplitterConvention::HomI:
      u00 = s;
      u01 = kI * s;
      u10 = kI * s;
      u11 = s;
      break;
    case BeamSplitterConvention::Eq9: {
      const Amplitude e = std::polar(1.0, p.theta);
      u00 = s;
      u01 = e * s;
      u10 = s;
      u11 = -e * s;
      break;
    }
  }

  StateBuilder builder(state.mode_count(), state.cutoff());
  for (const auto& [occ, amp] : state.terms()) {
    const int na = occ[mode_a];
    const int nb = occ[mode_b];
    const double log_norm_in = log_factorial(na) + log_factorial(nb);
    Occupation key = occ;
    for (int i = 0; i <= na; ++i) {
      const Amplitude from_a = binomial(na, i) * detail::ipow(u00, i) * detail::ipow(u01, na - i);
      for (int j = 0; j <= nb; ++j) {
        const Amplitude from_b = binomial(nb, j) * detail::ipow(u10, j) * detail::ipow(u11, nb - j);
        const int out_a = i + j;
        const int out_b = na + nb - out_a;
        const double scale =
            std::exp(0.5 * (log_factorial(out_a) + log_factorial(out_b) - log_norm_in));
        key[mode_a] = out_a;
        key[mode_b] = out_b;
        builder.add(key, amp * from_a * from_b * scale);
      }
    }
  }
  return finish(std::move(builder), state.norm_squared());
}

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  if (n == 0) return m;
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const Eigen::MatrixXcd scaled = m / std::ldexp(1.0, squarings);

  // Taylor series; ||scaled||_1 <= 0.5 so 30 terms are far past double precision.
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Eigen::MatrixXcd squeeze_generator_dense(int cutoff, const SqueezeParams& p) {
  if (cutoff < 0 || cutoff > kDenseUnitaryMaxCutoff) {
    throw Error(ErrorKind::ResourceLimit,
                fmt::format("dense generator needs 0 <= cutoff <= {}, got {}", kDenseUnitaryMaxCutoff, cutoff));
  }
  const auto dim = static_cast<std::size_t>(cutoff + 1);
  const auto total = static_cast<Eigen::Index>(dim * dim);
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(total, total);
  for (Eigen::Index j = 0; j < total; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    for (const auto& e : generator_column(static_cast<int>(uj / dim), static_cast<int>(uj % dim), cutoff, p.xi())) {
      gen(static_cast<Eigen::Index>(e.row), j) += e.value;
    }
  }
  return gen;
}

Eigen::MatrixXcd squeeze_unitary_dense(int cutoff, const SqueezeParams& p) {
  if (cutoff < 0 || cutoff > kDenseUnitaryMaxCutoff) {
    throw Error(ErrorKind::ResourceLimit,
                fmt::format("dense unitary needs 0 <= cutoff <= {}, got {}", kDenseUnitaryMaxCutoff, cutoff));
  }
  const auto dim = static_cast<Eigen::Index>((cutoff + 1) * (cutoff + 1));
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& block : exponentiate_blocks(cutoff, p, {})) {
    for (std::size_t r = 0; r < block.basis.size(); ++r) {
      for (std::size_t c = 0; c < block.basis.size(); ++c) {
        u(static_cast<Eigen::Index>(block.basis[r]), static_cast<Eigen::Index>(block.basis[c])) =
            block.unitary(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  return u;
}

State matrix_exponential_oracle(const State& state, std::size_t mode_a, std::size_t mode_b,
                                const SqueezeParams& p) {
  check_mode_pair(state, mode_a, mode_b);
  const int cutoff = state.cutoff();
  if (cutoff > kOracleMaxCutoff) {
    throw Error(ErrorKind::ResourceLimit,
                fmt::format("oracle cutoff {} exceeds {}", cutoff, kOracleMaxCutoff));
  }
  const auto dim = static_cast<std::size_t>(cutoff + 1);
  auto index_of = [dim](const Occupation& occ, std::size_t a, std::size_t b) {
    return static_cast<std::size_t>(occ[a]) * dim + static_cast<std::size_t>(occ[b]);
  };

  // Group terms by the occupation of the spectator modes.
  std::map<Occupation, std::map<std::size_t, Amplitude>> groups;
  std::vector<std::size_t> seeds;
  for (const auto& [occ, amp] : state.terms()) {
    Occupation spectator = occ;
    spectator[mode_a] = 0;
    spectator[mode_b] = 0;
    const std::size_t idx = index_of(occ, mode_a, mode_b);
    groups[spectator][idx] += amp;
    seeds.push_back(idx);
  }

  const std::vector<Block> blocks = exponentiate_blocks(cutoff, p, seeds);

  StateBuilder builder(state.mode_count(), cutoff);
  for (const auto& [spectator, vec] : groups) {
    for (const auto& block : blocks) {
      const auto n = static_cast<Eigen::Index>(block.basis.size());
      Eigen::VectorXcd in = Eigen::VectorXcd::Zero(n);
      bool any = false;
      for (Eigen::Index k = 0; k < n; ++k) {
        auto it = vec.find(block.basis[static_cast<std::size_t>(k)]);
        if (it != vec.end()) {
          in(k) = it->second;
          any = true;
        }
      }
      if (!any) continue;
      const Eigen::VectorXcd out = block.unitary * in;
      Occupation key = spectator;
      for (Eigen::Index k = 0; k < n; ++k) {
        const std::size_t idx = block.basis[static_cast<std::size_t>(k)];
        key[mode_a] = static_cast<int>(idx / dim);
        key[mode_b] = static_cast<int>(idx % dim);
        builder.add(key, out(k));
      }
    }
  }
  return std::move(builder).build();
}

}  // namespace dualopa
