#pragma once

// Stock-and-flow model of one company's supply chain: production, workforce,
// finished-goods logistics with backlog, a mirrored raw-material tier, and
// the market-level pricing loop shared by both companies.
//
// All rates are per day, stocks in units (labor in persons). The model is
// advanced by forward Euler; outflows are limited so that no stock can be
// driven below zero, which keeps every stock's bookkeeping identity exact.

#include <array>
#include <utility>

namespace duopoly::sd {

struct SDParams {
  // Strategic: manufacturing
  double vacancy_creation_time = 3.0;  // VacCT
  double layoff_time = 5.0;            // LayoffT
  double labor_fulfill_time = 8.0;     // LaborFT
  double wip_fulfill_time = 2.0;       // WIPFT
  // Strategic: logistics
  double inv_fulfill_time = 8.0;       // InvFT
  double material_lead_time = 4.0;     // M_LT
  double safety_stock_cov = 8.0;       // SSCov
  double material_inv_cov = 4.0;       // M_InvCov
  // Strategic: pricing
  double psens_cost = 0.5;   // PSens_C in [0,1]
  double psens_inv = -0.5;   // PSens_I in [-1,0]
  double mfg_price = 1.5;    // expected cost-based unit price, the E(c_P) anchor of the cost effect

  // Structural constants
  double cycle_time = 2.0;          // CycleT
  double vacancy_fill_time = 5.0;   // VacFT
  double employment_time = 200.0;   // EmployT
  double order_process_time = 1.0;  // OPT
  double labor_productivity = 1.25; // ALP, units per labor-hour
  double labor_hours = 8.0;         // ALT, hours per day
  double max_inv_cov = 0.0;         // MaxInvCov; <= 0 selects OPT + SSCov
  double max_layoff_rate = 0.0;     // MaxLR; <= 0 leaves LayoffR uncapped
  double material_adjust_time = 2.0;
  double min_inv_cov = 0.1;         // floor applied to InvCov before exponentiation
  double price_adjust_time = 20.0;  // MPFT

  double smooth_wip = 0.5;    // lambda_W
  double smooth_prod = 0.5;   // lambda_P
  double smooth_labor = 0.5;  // lambda_L
  double smooth_vac = 0.5;    // lambda_V

  double sigma_wip = 0.0;     // sigma_W
  double sigma_prod = 0.0;    // sigma_P
  double sigma_order = 0.0;   // sigma_O
  double sigma_inv = 0.0;     // sigma_I
};

/// Throws ParameterError naming the first violated constraint.
void validate(const SDParams& p);

/// MaxInvCov actually used by pricing.
double effective_max_inv_cov(const SDParams& p) noexcept;

/// One day's noise draws, already scaled by the configured standard deviations.
struct SDNoise {
  double wip = 0.0;
  double prod = 0.0;
  double order = 0.0;
  double inv = 0.0;
};

struct SDState {
  // stocks
  double wip = 0.0;
  double inv = 0.0;
  double labor = 0.0;
  double vac = 0.0;
  double backlog = 0.0;
  double material = 0.0;           // M_Inv
  double material_pipeline = 0.0;  // raw material in transit

  // smoothed adjustments, carried between steps
  double adj_wip = 0.0;
  double adj_prod = 0.0;
  double adj_labor = 0.0;
  double adj_vac = 0.0;

  // coverage and price seen by the market
  double inv_cov = 0.0;
  double price = 1.0;
};

/// Every rate and auxiliary computed from the state at the start of a step.
struct CompanyRates {
  double order = 0.0;
  double desired_inv = 0.0;
  double desired_wip = 0.0;
  double desired_prod_begin = 0.0;
  double desired_labor = 0.0;
  double desired_hire = 0.0;
  double desired_vac = 0.0;
  double desired_material = 0.0;

  double adj_wip = 0.0;
  double adj_prod = 0.0;
  double adj_labor = 0.0;
  double adj_vac = 0.0;

  double prod_begin = 0.0;
  double prod_complete = 0.0;
  double ship = 0.0;
  double hire = 0.0;
  double retire = 0.0;
  double layoff = 0.0;
  double vac_begin = 0.0;
  double material_supply = 0.0;  // MSR into production
  double material_order = 0.0;
  double material_arrival = 0.0;
  double inv_cov = 0.0;
};

/// lambda * (desired - actual) / fulfill_time + (1 - lambda) * prev_adjust.
double smooth_adjust(double desired, double actual, double fulfill_time, double prev_adjust, double lambda);

/// clamp(inv / desired_inv, 0, 1).
double fulfillment_ratio(double inv, double desired_inv);

/// Rates at time t. Throws StateError for non-finite or negative stocks, ParameterError for dt <= 0.
CompanyRates compute_rates(const SDState& s, const SDParams& p, double order_rate, const SDNoise& noise, double dt);

/// Production side: WIP, Labor, Vac, raw-material consumption, and the adjustment memories.
SDState step_production(const SDState& s, const SDParams& p, double order_rate, const SDNoise& noise, double dt);

/// Logistics side: Inv, Backlog, raw-material arrivals and pipeline, InvCov.
SDState step_logistics(const SDState& s, const SDParams& p, double order_rate, const SDNoise& noise, double dt);

/// Both sides from the same start state; the per-substep update used by the simulator.
SDState step_company(const SDState& s, const SDParams& p, double order_rate, const SDNoise& noise, double dt,
                     CompanyRates* rates_out = nullptr);

/// State in which, at constant zero-noise demand, every desired quantity equals its actual value.
SDState steady_state(const SDParams& p, double demand);

// ---- pricing ----

struct PricingState {
  double market_price = 1.5;  // MP
  std::array<double, 2> cost_effect{1.0, 1.0};  // F_C
  std::array<double, 2> inv_effect{1.0, 1.0};   // F_I
  double change_rate = 0.0;                     // PriceCR
};

struct PricingInputs {
  double cost_anchor = 1.5;  // E(c_P)
  double inv_cov = 1.0;
  double max_inv_cov = 1.0;
  double psens_cost = 0.0;
  double psens_inv = 0.0;
  double min_inv_cov = 0.1;
};

PricingInputs pricing_inputs(const SDParams& p, double inv_cov) noexcept;

/// F_C, F_I and Price for each company from the current MP, then one Euler step of MP.
std::pair<std::array<double, 2>, PricingState> step_pricing(const PricingState& shared,
                                                            const std::array<PricingInputs, 2>& companies,
                                                            double adjust_time, double dt);

}  // namespace duopoly::sd
