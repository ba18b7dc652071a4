#include <gtest/gtest.h>

#include <cmath>

#include "duopoly/error.hpp"
#include "duopoly/stability.hpp"
#include "oracles.hpp"

using namespace duopoly;
using namespace duopoly::gsa;
using game::EmpiricalGame;
using game::Profile;

namespace {

StabilityOptions deterministic(UpdateRule rule = UpdateRule::alternating) {
  StabilityOptions o;
  o.steps = 2000;  // window of 200 steps covers every limit cycle of a 6-strategy game
  o.noisy = false;
  o.rule = rule;
  return o;
}

EmpiricalGame matching_pennies() {
  return EmpiricalGame::from_payoffs(2, false, [](std::size_t p, std::size_t a, std::size_t b) {
    const double match = a == b ? 1.0 : -1.0;
    return p == 0 ? match : -match;
  });
}

double ratio_sum(const StabilityRatios& r) { return r.asymptotic + r.marginal + r.instable; }

StabilityClass oracle_class(double dev, double tol, double eps) {
  if (dev <= tol) return StabilityClass::asymptotically_stable;
  if (dev <= eps) return StabilityClass::marginally_stable;
  return StabilityClass::instable;
}

}  // namespace

TEST(Stability, MatchesLimitCycleEnumeration) {
  for (UpdateRule rule : {UpdateRule::alternating, UpdateRule::simultaneous})
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const std::size_t s = 2 + seed % 5;
      const EmpiricalGame g = oracle::random_symmetric_game(s, seed);
      const Profile sol{seed % s, (seed / 3) % s};
      const double eps = 30.0, tol = 5.0;
      const StabilityResult r = stability_analysis(g, sol, eps, tol, deterministic(rule), seed);
      ASSERT_EQ(r.classes.size(), s * s);
      for (std::size_t i = 0; i < r.initial.size(); ++i) {
        const double dev = oracle::limit_cycle_deviation(g, r.initial[i], sol, rule == UpdateRule::alternating);
        ASSERT_EQ(r.classes[i], oracle_class(dev, tol, eps)) << "seed " << seed << " start " << i;
      }
      EXPECT_NEAR(ratio_sum(r.ratios), 1.0, 1e-12);
    }
}

TEST(Stability, StrictEquilibriumAttractsItsBasin) {
  // coordination game: (0,0) and (1,1) are strict equilibria
  const EmpiricalGame g = EmpiricalGame::from_payoffs(2, true, [](std::size_t, std::size_t a, std::size_t b) {
    return a == b ? (a == 0 ? 10.0 : 5.0) : 0.0;
  });
  const StabilityResult r = stability_analysis(g, {0, 0}, 0.0, 0.0, deterministic(), 1);
  EXPECT_EQ(r.classes[0], StabilityClass::asymptotically_stable);  // start (0,0)
  EXPECT_EQ(r.classes[2], StabilityClass::asymptotically_stable);  // (1,0): player 1 moves first, to 0
  EXPECT_EQ(r.classes[1], StabilityClass::instable);               // (0,1): player 1 joins 1
  EXPECT_EQ(r.classes[3], StabilityClass::instable);               // (1,1) stays put
  EXPECT_EQ(r.final_profiles[2], (Profile{0, 0}));
}

TEST(Stability, DominantStrategyIsGloballyStable) {
  const double u[2][2] = {{3, 0}, {5, 1}};
  const EmpiricalGame g = EmpiricalGame::from_payoffs(2, true, [&](std::size_t p, std::size_t a, std::size_t b) {
    return p == 0 ? u[a][b] : u[b][a];
  });
  for (UpdateRule rule : {UpdateRule::alternating, UpdateRule::simultaneous}) {
    const StabilityResult r = stability_analysis(g, {1, 1}, 0.0, 0.0, deterministic(rule), 1);
    EXPECT_DOUBLE_EQ(r.ratios.asymptotic, 1.0);
  }
}

TEST(Stability, MatchingPenniesIsInstable) {
  for (UpdateRule rule : {UpdateRule::alternating, UpdateRule::simultaneous}) {
    const StabilityResult r = stability_analysis(matching_pennies(), {0, 0}, 1.0, 0.0, deterministic(rule), 7);
    EXPECT_DOUBLE_EQ(r.ratios.instable, 1.0);
  }
}

TEST(Stability, HugeEpsilonMakesEverythingAtLeastMarginal) {
  const EmpiricalGame g = oracle::random_symmetric_game(5, 3);
  const StabilityResult r = stability_analysis(g, {0, 0}, 1e6, 0.0, deterministic(), 3);
  EXPECT_DOUBLE_EQ(r.ratios.instable, 0.0);
}

TEST(Stability, RelabellingStrategiesPermutesTheResult) {
  const std::size_t s = 5;
  const EmpiricalGame g = oracle::random_symmetric_game(s, 11);
  const std::size_t perm[s] = {3, 0, 4, 1, 2};
  const EmpiricalGame h = EmpiricalGame::from_payoffs(s, true, [&](std::size_t p, std::size_t a, std::size_t b) {
    std::size_t ia = 0, ib = 0;
    for (std::size_t i = 0; i < s; ++i) {
      if (perm[i] == a) ia = i;
      if (perm[i] == b) ib = i;
    }
    return g.mean(p, {ia, ib});
  });
  const StabilityResult rg = stability_analysis(g, {1, 2}, 20.0, 1.0, deterministic(), 5);
  const StabilityResult rh = stability_analysis(h, {perm[1], perm[2]}, 20.0, 1.0, deterministic(), 5);
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b) EXPECT_EQ(rg.classes[a * s + b], rh.classes[perm[a] * s + perm[b]]);
}

TEST(Stability, NoisyRunIsSeededAndJobInvariant) {
  EmpiricalGame g(3, true);
  Rng rng(1);
  for (Profile p : g.stored_profiles()) {
    game::PayoffSamples smp;
    for (int i = 0; i < 6; ++i) smp.add(i, 10.0 * p.first + normal(rng, 3.0), 10.0 * p.second + normal(rng, 3.0));
    g.set(p, smp);
  }
  StabilityOptions o;
  o.steps = 300;
  const StabilityResult a = stability_analysis(g, {2, 2}, 5.0, 1.0, o, 99);
  o.jobs = 4;
  const StabilityResult b = stability_analysis(g, {2, 2}, 5.0, 1.0, o, 99);
  EXPECT_EQ(a.classes, b.classes);
  EXPECT_EQ(a.final_profiles, b.final_profiles);
  EXPECT_NEAR(ratio_sum(a.ratios), 1.0, 1e-12);
}

TEST(Stability, InvalidInputsAreRejected) {
  const EmpiricalGame g = matching_pennies();
  EXPECT_THROW(stability_analysis(g, {2, 0}, 1.0, 0.0, deterministic(), 1), ParameterError);
  EXPECT_THROW(stability_analysis(g, {0, 0}, -1.0, 0.0, deterministic(), 1), ParameterError);
  StabilityOptions o = deterministic();
  o.steps = 0;
  EXPECT_THROW(stability_analysis(g, {0, 0}, 1.0, 0.0, o, 1), ParameterError);
  EXPECT_THROW(stability_analysis(EmpiricalGame(2, true), {0, 0}, 1.0, 0.0, deterministic(), 1),
               IncompleteGameError);
  EXPECT_EQ(name(StabilityClass::marginally_stable), "MS");
}
