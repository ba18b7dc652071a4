#pragma once

// One replication of the coupled model: two supply chains feeding the shared
// consumer market, with cost and revenue accounting for the game payoff.

#include <array>
#include <cstdint>
#include <vector>

#include "duopoly/game.hpp"
#include "duopoly/market.hpp"
#include "duopoly/sd.hpp"
#include "duopoly/strategy.hpp"

namespace duopoly::hybrid {

struct CostRates {
  double production = 0.3;    // per unit completed
  double raw_material = 0.2;  // per unit of raw material received
  double holding = 0.01;      // per unit-day of finished inventory
  double backlog = 0.05;      // per unit-day of backlog
  double transport = 0.05;    // per unit shipped
  void validate() const;
};

enum class SunkCostMode { total, own_term };

struct HybridConfig {
  sd::SDParams sd;            // constants and noise; strategic fields come from each company's strategy
  abs::MarketParams market;
  CostRates costs;
  int days = 100;
  int substeps = 4;           // SD steps per day
  double consumption = 1.0;   // units per agent per day; TOR = agents * consumption
  int marketing_period = 10;  // days between budget updates and Ad/Pm draws
  double initial_demand_fraction = 0.8;  // supply chains start at steady state for this share of TOR/2
  bool random_marketing = true;          // Ad/Pm drawn within their level range; false: range midpoints
  SunkCostMode sunk_cost = SunkCostMode::total;
  int accounting_start = 0;   // first day whose costs and revenue count towards the payoff

  double dt() const noexcept { return 1.0 / substeps; }
  double total_order_rate() const noexcept { return static_cast<double>(market.agents) * consumption; }
  void validate() const;
  /// Same configuration with every noise source off and marketing at range midpoints.
  HybridConfig zero_noise() const;
};

/// SD parameters of one company: the configured constants with the strategy's detailed factors.
sd::SDParams company_params(const sd::SDParams& base, const strategy::CompanyStrategy& s);

struct CompanySeries {
  std::vector<double> price, inv, backlog, ship, share, labor, wip, material;
};

/// Integrals accumulated over the accounting window.
struct Totals {
  double revenue = 0.0;    // TRev
  double completed = 0.0;  // units, ProdCR * dt
  double material = 0.0;   // units received
  double inventory = 0.0;  // unit-days
  double backlog = 0.0;    // unit-days
  double shipped = 0.0;    // units
  double marketing = 0.0;  // currency, C_M
  double sunk = 0.0;       // currency, this company's MB * |Inter| term
};

struct ReplicationOutput {
  std::array<CompanySeries, 2> series;
  std::vector<double> market_price;
  std::array<Totals, 2> totals;
  std::uint64_t seed = 0;
  int days = 0;
  int warmup_days = 0;  // detected, see detect_warmup
  bool mirrored = false;
};

/// Revenue and cost items of one company.
struct CostBreakdown {
  double revenue, production, raw_material, inventory, backlog, transport, marketing, sunk;
  double payoff() const {
    return revenue - (production + raw_material + inventory + backlog + transport + marketing + sunk);
  }
};

CostBreakdown cost_breakdown(const ReplicationOutput& rep, const CostRates& rates, std::size_t company,
                             SunkCostMode mode = SunkCostMode::total);

/// Net profit per company.
std::array<double, 2> compute_payoff(const ReplicationOutput& rep, const CostRates& rates,
                                     SunkCostMode mode = SunkCostMode::total);

/// Runs one replication. With mirrored=true every company-specific random stream is taken from
/// the other company's slot and market ties map to the opposite brand, so running (b, a)
/// mirrored reproduces running (a, b) with the companies exchanged.
/// Throws ReplicationError when any state becomes non-finite.
ReplicationOutput run_replication(const std::array<strategy::CompanyStrategy, 2>& companies,
                                  const HybridConfig& config, std::uint64_t seed, bool mirrored = false);

/// Mean of the last `window` entries at every position (fewer at the start).
std::vector<double> trailing_mean(const std::vector<double>& v, int window);

/// First day from which the trailing `window`-day means of WIP, Inv, Labor and raw material of
/// both companies stay within `tolerance` (relative) of their final values. Averaging over a
/// window removes the day-to-day alternation of market shares before the comparison.
int detect_warmup(const ReplicationOutput& rep, double tolerance = 0.02, int window = 10);

/// Seed of replication `id` in a profile's stream.
std::uint64_t replication_seed(std::uint64_t stream, std::uint64_t id);

/// Replications first_id .. first_id+n-1 of the stream, payoffs tagged by id.
game::PayoffSamples estimate_payoffs(const std::array<strategy::CompanyStrategy, 2>& companies, std::size_t n,
                                     const HybridConfig& config, std::uint64_t stream, std::uint64_t first_id = 0,
                                     unsigned jobs = 1);

}  // namespace duopoly::hybrid
