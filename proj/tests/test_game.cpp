#include <gtest/gtest.h>

#include <algorithm>

#include "duopoly/error.hpp"
#include "duopoly/game.hpp"
#include "oracles.hpp"

using namespace duopoly;
using namespace duopoly::game;

namespace {

bool contains(const std::vector<Profile>& v, Profile p) { return std::find(v.begin(), v.end(), p) != v.end(); }

// Prisoner's dilemma, strategy 0 = cooperate.
EmpiricalGame prisoners_dilemma() {
  const double u[2][2] = {{3, 0}, {5, 1}};
  return EmpiricalGame::from_payoffs(2, true, [&](std::size_t p, std::size_t a, std::size_t b) {
    return p == 0 ? u[a][b] : u[b][a];
  });
}

EmpiricalGame matching_pennies() {
  return EmpiricalGame::from_payoffs(2, false, [](std::size_t p, std::size_t a, std::size_t b) {
    const double match = a == b ? 1.0 : -1.0;
    return p == 0 ? match : -match;
  });
}

}  // namespace

TEST(Game, SymmetricProfileCounts) {
  const std::uint64_t expect[] = {3, 10, 36, 136, 528, 2080, 8256, 32896, 131328, 524800};
  std::uint64_t s = 2;
  for (std::uint64_t e : expect) {
    EXPECT_EQ(symmetric_profile_count(s), e) << s;
    EXPECT_EQ(symmetric_profile_count(s), s * (s + 1) / 2);
    s *= 2;
  }
  EXPECT_EQ(symmetric_profile_count(1), 1u);
  EXPECT_EQ(EmpiricalGame(16, true).stored_profiles().size(), 136u);
  EXPECT_EQ(EmpiricalGame(16, false).stored_profiles().size(), 256u);
}

TEST(Game, PrisonersDilemma) {
  const EmpiricalGame g = prisoners_dilemma();
  EXPECT_EQ(pure_nash(g, 0.0), (std::vector<Profile>{{1, 1}}));
  EXPECT_DOUBLE_EQ(regret(g, {0, 0}), 2.0);
  // with eps = 2 mutual cooperation is an eps-equilibrium
  EXPECT_TRUE(contains(pure_nash(g, 2.0), Profile{0, 0}));
  EXPECT_EQ(best_response_search(g, {0, 0}, 0.0), (Profile{1, 1}));
}

TEST(Game, MatchingPenniesHasNoPureEquilibrium) {
  const EmpiricalGame g = matching_pennies();
  EXPECT_TRUE(pure_nash(g, 0.0).empty());
  EXPECT_EQ(pure_nash(g, 2.0).size(), 4u);
  for (Profile p : g.stored_profiles()) EXPECT_DOUBLE_EQ(regret(g, p), 2.0);
}

TEST(Game, PureNashMatchesEnumeration) {
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t s = 2 + seed % 7;
    const EmpiricalGame g = seed % 2 ? oracle::random_symmetric_game(s, seed) : oracle::random_integer_game(s, seed);
    mismatches += pure_nash(g, 0.0) != oracle::brute_force_nash(g, 0.0);
  }
  EXPECT_EQ(mismatches, 0u);
}

TEST(Game, EpsilonMonotonicityAndRegret) {
  const double eps_grid[] = {0.0, 0.5, 1.0, 5.0, 20.0, 80.0, 1e9};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t s = 2 + seed % 7;
    const EmpiricalGame g = seed % 2 ? oracle::random_symmetric_game(s, seed) : oracle::random_integer_game(s, seed);
    std::vector<Profile> prev;
    for (double eps : eps_grid) {
      const std::vector<Profile> ne = pure_nash(g, eps);
      for (Profile p : prev) ASSERT_TRUE(contains(ne, p)) << "seed " << seed << " eps " << eps;
      for (Profile p : g.stored_profiles()) {
        for (Profile q : {p, Profile{p.second, p.first}}) {
          ASSERT_EQ(contains(ne, q), regret(g, q) <= eps) << seed;
        }
      }
      prev = ne;
    }
    EXPECT_EQ(prev.size(), s * s);
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b)
        ASSERT_DOUBLE_EQ(std::max(0.0, regret(g, {a, b})), oracle::brute_force_regret(g, {a, b}));
  }
}

TEST(Game, EquilibriaInvariantUnderAffineRescaling) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t s = 3 + seed % 4;
    const EmpiricalGame g = oracle::random_symmetric_game(s, seed);
    const EmpiricalGame h = EmpiricalGame::from_payoffs(s, true, [&](std::size_t p, std::size_t a, std::size_t b) {
      return 3.0 * g.mean(p, {a, b}) + 1000.0;
    });
    EXPECT_EQ(pure_nash(g, 0.0), pure_nash(h, 0.0));
    EXPECT_EQ(pure_nash(g, 10.0), pure_nash(h, 30.0));
  }
}

TEST(Game, SymmetricEquilibriaComeInMirrorPairs) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const EmpiricalGame g = oracle::random_integer_game(2 + seed % 6, seed);
    const auto ne = pure_nash(g, 0.5);
    for (Profile p : ne) EXPECT_TRUE(contains(ne, Profile{p.second, p.first}));
  }
}

TEST(Game, BestResponseSearchFixedPointsAreEquilibria) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const EmpiricalGame g = oracle::random_symmetric_game(2 + seed % 6, seed);
    const Profile end = best_response_search(g, {0, 0}, 0.0, 10000);
    const bool fixed = best_response_search(g, end, 0.0, 1) == end;
    EXPECT_EQ(fixed, contains(pure_nash(g, 0.0), end)) << seed;
  }
}

TEST(Game, StorageMirrorsSymmetricProfiles) {
  EmpiricalGame g(3, true);
  PayoffSamples s;
  s.add(0, 1.0, 2.0);
  s.add(1, 3.0, 4.0);
  g.set({2, 0}, s);
  EXPECT_TRUE(g.has({0, 2}));
  EXPECT_DOUBLE_EQ(g.mean(0, {2, 0}), 2.0);
  EXPECT_DOUBLE_EQ(g.mean(1, {2, 0}), 3.0);
  EXPECT_DOUBLE_EQ(g.mean(0, {0, 2}), 3.0);
  EXPECT_EQ(g.values(0, {2, 0}), (std::vector<double>{1.0, 3.0}));
  EXPECT_EQ(g.values(1, {0, 2}), (std::vector<double>{1.0, 3.0}));
  EXPECT_FALSE(g.complete());
  EXPECT_EQ(g.missing().size(), 5u);
  EXPECT_THROW(pure_nash(g, 0.0), IncompleteGameError);
  try {
    g.require_complete();
  } catch (const IncompleteGameError& e) {
    EXPECT_EQ(e.missing().size(), 5u);
  }
}

TEST(Game, SamplesMergeByIdAndTrim) {
  EmpiricalGame g(2, false);
  PayoffSamples a, b;
  for (int i = 0; i < 5; ++i) a.add(2 * i, i, -i);
  for (int i = 0; i < 5; ++i) b.add(2 * i + 1, 100 + i, 0);
  g.set({0, 1}, a);
  g.add_samples({0, 1}, b);
  const PayoffSamples m = g.samples({0, 1});
  EXPECT_TRUE(std::is_sorted(m.ids.begin(), m.ids.end()));
  EXPECT_EQ(m.size(), 10u);
  g.set_trim(2);
  EXPECT_EQ(g.summary(0, {0, 1}).n, 6u);
  EXPECT_EQ(g.values(0, {0, 1}).size(), 6u);
  EXPECT_THROW(g.set({1, 1}, PayoffSamples{}), ParameterError);
  EXPECT_THROW(g.has({2, 0}), ParameterError);
}

TEST(Game, SummaryOnlyCells) {
  EmpiricalGame g(2, true);
  g.set_summaries({1, 0}, {stats::Summary{10, 5.0, 1.0}, stats::Summary{10, 7.0, 2.0}});
  EXPECT_TRUE(g.summary_only({0, 1}));
  EXPECT_DOUBLE_EQ(g.mean(0, {0, 1}), 7.0);
  EXPECT_DOUBLE_EQ(g.summary(1, {0, 1}).variance, 1.0);
  EXPECT_THROW(g.values(0, {0, 1}), InsufficientDataError);
  PayoffSamples s;
  s.add(0, 1, 1);
  EXPECT_THROW(g.add_samples({0, 1}, s), InsufficientDataError);
  g.set_trim(3);  // statistics are kept as given
  EXPECT_DOUBLE_EQ(g.mean(0, {1, 0}), 5.0);
}
