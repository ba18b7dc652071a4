#include <gtest/gtest.h>

#include <cmath>

#include "duopoly/doe.hpp"
#include "duopoly/error.hpp"
#include "duopoly/rng.hpp"
#include "duopoly/strategy.hpp"

using namespace duopoly;
using namespace duopoly::doe;

namespace {

std::vector<std::vector<int>> full_two_level(std::size_t k) {
  std::vector<std::vector<int>> out;
  for (std::size_t x = 0; x < (std::size_t{1} << k); ++x) {
    std::vector<int> row(k);
    for (std::size_t f = 0; f < k; ++f) row[f] = (x >> f) & 1 ? 3 : 0;
    out.push_back(row);
  }
  return out;
}

double coded(int level) { return level >= 2 ? 1.0 : -1.0; }

}  // namespace

TEST(Doe, NoiselessLinearResponseIsExact) {
  const auto design = full_two_level(3);
  const double beta[3] = {5.0, 0.0, -2.5};
  std::vector<Response> r;
  for (const auto& row : design) {
    double y = 100.0;
    for (std::size_t f = 0; f < 3; ++f) y += beta[f] * coded(row[f]);
    r.push_back({y, 0.0, 0.0});
  }
  const Analysis a = doe_significance(design, r, 0.05, true);
  ASSERT_EQ(a.main.size(), 3u);
  for (std::size_t f = 0; f < 3; ++f) {
    EXPECT_NEAR(a.main[f].effect, 2.0 * beta[f], 1e-12);
    EXPECT_EQ(a.main[f].significant, beta[f] != 0.0);
  }
  ASSERT_EQ(a.interactions.size(), 3u);
  for (const Interaction& i : a.interactions) EXPECT_NEAR(i.effect, 0.0, 1e-12);
}

TEST(Doe, InteractionIsRecovered) {
  const auto design = full_two_level(2);
  std::vector<Response> r;
  for (const auto& row : design) r.push_back({3.0 * coded(row[0]) * coded(row[1]), 0.0, 0.0});
  const Analysis a = doe_significance(design, r, 0.05);
  EXPECT_NEAR(a.interactions[0].effect, 6.0, 1e-12);
  EXPECT_NEAR(a.main[0].effect, 0.0, 1e-12);
}

// Effect standard error follows from the per-run variances; a hand-computed 2-run case.
TEST(Doe, StandardErrorAndWelchDegreesOfFreedom) {
  const std::vector<std::vector<int>> design{{0}, {3}};
  const Analysis a = doe_significance(design, {{10.0, 4.0, 9.0}, {16.0, 5.0, 4.0}}, 0.05);
  EXPECT_DOUBLE_EQ(a.main[0].effect, 6.0);
  EXPECT_DOUBLE_EQ(a.main[0].std_error, 3.0);
  EXPECT_DOUBLE_EQ(a.main[0].df, 81.0 / (16.0 / 9.0 + 25.0 / 4.0));
  EXPECT_DOUBLE_EQ(a.main[0].t, 2.0);
}

TEST(Doe, ClassificationOverNoisyTrials) {
  const auto design = full_two_level(4);
  const double beta[4] = {40.0, 0.0, -25.0, 0.0};
  Rng rng(2024);
  std::size_t correct = 0, total = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Response> r;
    for (const auto& row : design) {
      double mu = 1000.0;
      for (std::size_t f = 0; f < 4; ++f) mu += beta[f] * coded(row[f]);
      std::vector<double> y(10);
      for (double& v : y) v = mu + normal(rng, 50.0);
      r.push_back(response_from_samples(y));
    }
    const Analysis a = doe_significance(design, r, 0.05);
    for (std::size_t f = 0; f < 4; ++f) {
      correct += a.main[f].significant == (beta[f] != 0.0);
      ++total;
    }
  }
  EXPECT_GE(static_cast<double>(correct) / static_cast<double>(total), 0.95);
}

TEST(Doe, FractionalDesignEstimatesMainEffects) {
  std::vector<strategy::ActiveFactor> f;
  for (int i = 0; i < 6; ++i) f.push_back({static_cast<strategy::Factor>(i), 2});
  const auto runs = strategy::design(f, 16);
  std::vector<Response> r;
  for (const auto& row : runs) {
    double y = 0.0;
    for (std::size_t j = 0; j < 6; ++j) y += static_cast<double>(j + 1) * coded(row[j]);
    r.push_back({y, 1.0, 9.0});
  }
  const Analysis a = doe_significance(runs, r, 0.05);
  for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(a.main[j].effect, 2.0 * static_cast<double>(j + 1), 1e-12);
  EXPECT_THROW(doe_significance(runs, r, 0.05, true), DesignError);
}

TEST(Doe, MalformedDesignsAreRejected) {
  EXPECT_THROW(doe_significance({}, {}, 0.05), DesignError);
  EXPECT_THROW(doe_significance({{0}, {3}}, {{1, 0, 0}}, 0.05), DesignError);
  EXPECT_THROW(doe_significance({{0}, {0}, {3}}, {{1, 0, 0}, {1, 0, 0}, {1, 0, 0}}, 0.05), DesignError);
  EXPECT_THROW(doe_significance({{0, 3}, {3}}, {{1, 0, 0}, {1, 0, 0}}, 0.05), DesignError);
  auto design = full_two_level(2);
  design.pop_back();
  design.pop_back();
  EXPECT_THROW(doe_significance(design, {{1, 0, 0}, {2, 0, 0}}, 0.05, true), DesignError);
  EXPECT_THROW(response_from_samples(std::vector<double>{}), InsufficientDataError);
}
