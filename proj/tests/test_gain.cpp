#include <doctest.h>

#include <cmath>
#include <vector>

#include "dualopa/gain.hpp"

using namespace dualopa;

namespace {

// Brute-force argmax of Prob(n, m) on an even grid.
double grid_argmax(HeraldOutcome o, double lo, double hi, int points) {
  double best_r = lo;
  double best_p = -1.0;
  for (int i = 0; i < points; ++i) {
    const double r = lo + (hi - lo) * i / (points - 1);
    const double p = herald_probability(o, r);
    if (p > best_p) {
      best_p = p;
      best_r = r;
    }
  }
  return best_r;
}

}  // namespace

TEST_CASE("optimize_gain agrees with a grid scan") {
  for (HeraldOutcome o : {HeraldOutcome{1, 1}, HeraldOutcome{2, 2}, HeraldOutcome{1, 2}}) {
    CAPTURE(o.n);
    CAPTURE(o.m);
    const GainOptimum opt = optimize_gain({.objective = o});
    CHECK(std::abs(opt.r_star - grid_argmax(o, 0.01, 2.0, 10000)) < 1e-4);
    CHECK_FALSE(opt.bracket_warning);
    CHECK(opt.iterations > 0);
  }
}

TEST_CASE("optimal gains") {
  const GainOptimum g11 = optimize_gain({});
  CHECK(g11.r_star == doctest::Approx(0.658478948462408).epsilon(1e-6));
  CHECK(g11.p_star == doctest::Approx(0.0658436213991770).epsilon(1e-10));
  CHECK(g11.p_star == doctest::Approx(16.0 / 243.0).epsilon(1e-10));

  const GainOptimum g22 = optimize_gain({.objective = {2, 2}});
  CHECK(g22.r_star == doctest::Approx(0.881373587019543).epsilon(1e-6));

  const GainOptimum g12 = optimize_gain({.objective = {1, 2}});
  CHECK(g12.r_star == doctest::Approx(0.783399618486206).epsilon(1e-6));

  for (int n = 1; n <= 4; ++n) {
    const GainOptimum g = optimize_gain({.objective = {n, n}, .r_max = 3.0});
    const double t = std::tanh(g.r_star);
    CHECK(t * t == doctest::Approx(double(n) / (n + 2)).epsilon(1e-5));
  }
}

TEST_CASE("optimum is stationary") {
  const GainOptimum g = optimize_gain({.tolerance = 1e-9});
  const double h = 1e-5;
  const double dp = (herald_probability(1, 1, g.r_star + h) - herald_probability(1, 1, g.r_star - h)) / (2 * h);
  CHECK(std::abs(dp) < 1e-6);
}

TEST_CASE("monotone objective warns at the bracket edge") {
  const GainOptimum g = optimize_gain({.objective = {0, 0}});
  CHECK(g.bracket_warning);
  CHECK(g.r_star == doctest::Approx(0.01));
  CHECK(g.p_star == doctest::Approx(herald_probability(0, 0, 0.01)));

  const GainOptimum capped = optimize_gain({.objective = {4, 4}, .r_max = 0.5});
  CHECK(capped.bracket_warning);
  CHECK(capped.r_star == doctest::Approx(0.5));
}

TEST_CASE("sweep_gain") {
  const std::vector<double> rs{0.0, 0.3, 0.66, 1.08};
  const SweepSeries s = sweep_gain({1, 1}, rs);
  REQUIRE(s.prob_values.size() == rs.size());
  CHECK(s.r_values == rs);
  CHECK(s.prob_values[0] == 0.0);
  CHECK(s.prob_values[1] == doctest::Approx(0.0151531454810128));
  CHECK(s.prob_values[3] == doctest::Approx(0.0224581442948716));
}

TEST_CASE("linear optics comparison") {
  const LinearOpticsComparison c = linear_optics_comparison(0.658478948462408);
  CHECK(c.linear_rate == doctest::Approx(3.0 / 64.0));
  CHECK(c.dual_opa_rate == doctest::Approx(16.0 / 243.0).epsilon(1e-12));
  CHECK(c.ratio == doctest::Approx(1024.0 / 729.0).epsilon(1e-12));
  CHECK(c.ratio == doctest::Approx(1.40466392318244).epsilon(1e-12));
  CHECK(linear_optics_comparison(0.3).ratio < c.ratio);
}
