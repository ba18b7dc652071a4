#include <gtest/gtest.h>

#include <cmath>

#include "duopoly/error.hpp"
#include "duopoly/market.hpp"

using namespace duopoly;
using namespace duopoly::abs;

TEST(Marketing, SpendForceAndPerception) {
  const Spend s = marketing_spend(1000.0, 0.2, 0.3, 1.5, 10.0);
  EXPECT_DOUBLE_EQ(s.ad, 300.0);
  EXPECT_DOUBLE_EQ(s.promo, 450.0);
  EXPECT_DOUBLE_EQ(s.rate, 75.0);
  EXPECT_THROW(marketing_spend(1.0, 0.1, 0.1, 1.0, 0.0), ParameterError);

  EXPECT_DOUBLE_EQ(marketing_force(0.2, 0.3, -0.5, {1.0, 2.0, 4.0}), 0.2 + 0.6 + 4.0 * 0.06 - 0.5);
  const Perception q = update_perceptions(2.0, 0.1, 0.2, 0.3);
  EXPECT_DOUBLE_EQ(q.sus_ad, 0.2);
  EXPECT_DOUBLE_EQ(q.sens_pm, 0.4);
  EXPECT_DOUBLE_EQ(q.ft, 0.6);
}

TEST(Marketing, CostateEulerStep) {
  const std::array<double, 2> inter{1.0, -2.0};
  const auto next = update_costate(inter, 0.1, 0.2, 0.3, 1.9, {2.0, 3.0}, {0.5, 0.0}, 0.5);
  const double g = 2.0;
  EXPECT_DOUBLE_EQ(next[0], 1.0 + 0.5 * (0.2 * g * 1.0 + 0.06 * g * -2.0 - 1.0));
  EXPECT_DOUBLE_EQ(next[1], -2.0 + 0.5 * (0.3 * g * -2.0 + 0.06 * g * 1.0 - 3.0));
  EXPECT_THROW(update_costate(inter, 0.1, 0.2, 0.3, 1.0, {1, 1}, {0, 0}, 0.0), ParameterError);
  EXPECT_DOUBLE_EQ(sunk_cost({100.0, 50.0}, {-2.0, 3.0}), -200.0 + 150.0);
}

TEST(Marketing, PriceSensitivityAndMotivation) {
  EXPECT_DOUBLE_EQ(price_sensitivity(2.0, 0.5, 3.0, 2.0, 1.0), 1.0 - std::pow(2.0, 1.0 - 3.0));
  EXPECT_THROW(price_sensitivity(1.0, 0.0, 2.0, 1.0, 1.0), ParameterError);
  EXPECT_DOUBLE_EQ(motivation(0.5, 2.0, 0.25, 0.1, 0.2, 0.3, 0.4, 0.5),
                   0.5 * 1.5 + 0.1 * 0.2 + 0.3 * 0.25 + 0.4 * 0.5);
}

// Hand-built three-agent market on a path graph: the adopted brand is the one with the larger
// motivation computed straight from the scalar formulas.
TEST(Market, AdoptionFollowsScalarMotivation) {
  MarketParams p;
  p.agents = 3;
  const SocialNetwork net(3, {{0, 1}, {1, 2}});
  Agents a;
  a.socio = {0.6, 1.0, 1.4};
  a.init_ad = {0.5, 0.5, 0.5};
  a.init_pm = {0.5, 0.5, 0.5};
  a.init_ft = {0.5, 0.5, 0.5};
  a.brand = {0, 1, 1};
  const std::array<BrandInputs, 2> brands{BrandInputs{1.2, 0.3, 0.1, 0.0}, BrandInputs{1.0, 0.1, 0.4, 0.0}};
  MarketingState st;
  st.inter = {0.2, -0.1};
  const MarketingState before = st;
  const std::vector<std::int8_t> prev = a.brand;
  Rng rng(1);
  step_market(net, a, brands, st, p, rng);

  const double sum = 2.2;
  for (std::size_t k = 0; k < 3; ++k) {
    double m[2];
    for (std::size_t b = 0; b < 2; ++b) {
      const double f = marketing_force(brands[b].ad, brands[b].pm, before.inter[b], p.weights);
      const Perception q = update_perceptions(f, 0.5, 0.5, 0.5);
      std::size_t same = 0, deg = 0;
      for (std::size_t w : {k - 1, k + 1})
        if (w < 3) {
          ++deg;
          same += prev[w] == static_cast<std::int8_t>(b);
        }
      const double sens = price_sensitivity(brands[b].price, brands[b].pm, sum, p.price_base, a.socio[k]);
      m[b] = motivation(sens, brands[b].price, brands[b].pm, q.sus_ad, brands[b].ad, q.sens_pm, q.ft,
                        static_cast<double>(same) / static_cast<double>(deg));
    }
    ASSERT_NE(m[0], m[1]);
    EXPECT_EQ(a.brand[k], m[0] > m[1] ? 0 : 1) << k;
  }
}

TEST(Market, SharesSumToOne) {
  Market m(MarketParams{}, 1, 2, 3, false);
  for (int d = 0; d < 30; ++d) {
    const StepResult r = m.step({BrandInputs{1.5, 0.2, 0.2, 10.0}, BrandInputs{1.6, 0.1, 0.3, 10.0}});
    EXPECT_EQ(r.adopters[0] + r.adopters[1], MarketParams{}.agents);
    EXPECT_DOUBLE_EQ(r.shares[0] + r.shares[1], 1.0);
  }
}

TEST(Market, SwappedBrandsMirrorExactly) {
  MarketParams p;
  p.delta = {0.2, 0.2};
  Market a(p, 11, 12, 13, false);
  Market b(p, 11, 12, 13, true);
  for (int d = 0; d < 100; ++d) {
    const BrandInputs x{1.5 + 0.01 * (d % 7), 0.2, 0.15, 20.0};
    const BrandInputs y{1.4 + 0.02 * (d % 5), 0.35, 0.05, 5.0};
    const StepResult ra = a.step({x, y});
    const StepResult rb = b.step({y, x});
    ASSERT_EQ(ra.adopters[0], rb.adopters[1]) << d;
    ASSERT_EQ(ra.shares[0], rb.shares[1]);
    ASSERT_EQ(a.marketing().inter[0], b.marketing().inter[1]);
    ASSERT_EQ(a.marketing().inter[1], b.marketing().inter[0]);
  }
}

// Equal brands tie for every agent on the first day; the draw splits them about evenly.
TEST(Market, TiesBreakUniformly) {
  MarketParams p;
  p.agents = 2000;
  Market m(p, 1, 2, 3, false);
  const BrandInputs x{1.5, 0.2, 0.2, 0.0};
  const StepResult r = m.step({x, x});
  EXPECT_NEAR(r.shares[0], 0.5, 0.05);
}

TEST(Market, CostateStaysFiniteAtHighPrices) {
  Market m(MarketParams{}, 5, 6, 7, false);
  for (int d = 0; d < 200; ++d) m.step({BrandInputs{60.0, 0.0, 0.0, 100.0}, BrandInputs{45.0, 0.9, 0.9, 100.0}});
  EXPECT_TRUE(std::isfinite(m.marketing().inter[0]));
  EXPECT_TRUE(std::isfinite(m.marketing().total_force));
}

TEST(Market, InvalidInputsAreRejected) {
  Market m(MarketParams{}, 1, 2, 3, false);
  EXPECT_THROW(m.step({BrandInputs{0.0, 0.1, 0.1, 0.0}, BrandInputs{}}), StateError);
  MarketParams p;
  p.rho = NAN;
  EXPECT_THROW(validate(p), ParameterError);
}
