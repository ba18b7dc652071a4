#pragma once

// Consumer market: marketing spend and force, the two-company interaction
// co-state, and daily brand adoption by agents on a scale-free network.

#include <array>
#include <cstdint>
#include <vector>

#include "duopoly/network.hpp"
#include "duopoly/rng.hpp"

namespace duopoly::abs {

struct MarketParams {
  std::size_t agents = 200;
  std::size_t seed_nodes = 5;      // m0
  std::size_t edges_per_node = 3;  // m
  std::array<double, 3> weights{1.0, 1.0, 0.5};  // omega_1..3
  double rho = 0.1;
  std::array<double, 2> delta{0.2, 0.2};  // per-company co-state factor
  double init_ad = 0.5;  // I_a
  double init_pm = 0.5;  // I_p
  double init_ft = 0.5;  // I_f
  double price_base = 2.0;  // s
  double socio_low = 0.5;   // m_agent ~ U(socio_low, socio_high)
  double socio_high = 1.5;
  double budget_factor = 1.0;     // K
  double spend_adjust_time = 10;  // AdjTimeMS, days
  double costate_dt = 0.25;       // largest Euler substep of the co-state within a day
  bool average_price_sum = false; // use (P1+P2)/2 instead of P1+P2 as the price reference
};

void validate(const MarketParams& p);

struct Spend {
  double ad = 0.0;     // AdS
  double promo = 0.0;  // PmS
  double rate = 0.0;   // MSR, currency/day
};

Spend marketing_spend(double budget, double ad, double pm, double k, double adjust_time);

/// w1*ad + w2*pm + w3*ad*pm + inter.
double marketing_force(double ad, double pm, double inter, const std::array<double, 3>& w);

struct Perception {
  double sus_ad = 0.0;
  double sens_pm = 0.0;
  double ft = 0.0;
};

Perception update_perceptions(double force, double i_a, double i_p, double i_f);

/// One Euler step of d(inter)/dt = Delta*(rho+F)*inter - price*(1-pm).
std::array<double, 2> update_costate(const std::array<double, 2>& inter, double rho, double delta1, double delta2,
                                     double total_force, const std::array<double, 2>& prices,
                                     const std::array<double, 2>& pms, double dt);

/// Sum of MB_i * Inter_i.
double sunk_cost(const std::array<double, 2>& budgets, const std::array<double, 2>& inters);

/// m_agent - s^(price*(1-pm) - price_sum). Requires s > 1.
double price_sensitivity(double price, double pm, double price_sum, double s, double m_agent);

/// SensP*price*(1-pm) + SusAd*ad + SensPm*pm + Ft*inf.
double motivation(double sens_p, double price, double pm, double sus_ad, double ad, double sens_pm, double ft,
                  double inf);

struct BrandInputs {
  double price = 1.0;
  double ad = 0.15;
  double pm = 0.15;
  double budget = 0.0;  // MB for the current marketing period
};

struct MarketingState {
  std::array<double, 2> inter{0.0, 0.0};
  std::array<double, 2> force{0.0, 0.0};
  std::array<Spend, 2> spend{};
  double total_force = 0.0;  // F at the end of the last step
};

/// Agent population and adoption state. `brand` holds 0/1, or -1 before the first step.
struct Agents {
  std::vector<double> socio;
  std::vector<double> init_ad;
  std::vector<double> init_pm;
  std::vector<double> init_ft;
  std::vector<std::int8_t> brand;
};

Agents make_agents(const MarketParams& p, std::uint64_t seed);

struct StepResult {
  std::array<double, 2> shares{0.5, 0.5};
  std::array<std::size_t, 2> adopters{0, 0};
};

/// One day of the market. Influence uses the previous day's adoption; every agent then adopts the
/// brand with the higher motivation. Exact ties use a uniform draw taken for every agent every
/// day; `mirror` flips the brand that draw maps to, so a run with swapped brand inputs and
/// mirror=true reproduces the original run with labels exchanged.
StepResult step_market(const SocialNetwork& net, Agents& agents, const std::array<BrandInputs, 2>& brands,
                       MarketingState& state, const MarketParams& p, Rng& rng, bool mirror = false);

/// Network, agents, co-state and tie-break stream for one replication.
class Market {
 public:
  Market(const MarketParams& p, std::uint64_t network_seed, std::uint64_t agent_seed, std::uint64_t tie_seed,
         bool mirror);

  StepResult step(const std::array<BrandInputs, 2>& brands);

  const MarketingState& marketing() const noexcept { return state_; }
  const Agents& agents() const noexcept { return agents_; }
  const SocialNetwork& network() const noexcept { return net_; }

 private:
  MarketParams params_;
  SocialNetwork net_;
  Agents agents_;
  MarketingState state_;
  Rng rng_;
  bool mirror_;
};

}  // namespace duopoly::abs
