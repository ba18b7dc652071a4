#include "duopoly/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "duopoly/error.hpp"
#include "duopoly/parallel.hpp"
#include "duopoly/rng.hpp"

namespace duopoly::hybrid {

namespace {

using strategy::Factor;

enum Stream : std::uint64_t { kNetwork = 1, kAgents = 2, kTies = 3, kNoise = 4, kMarketing = 5 };

bool finite_state(const sd::SDState& s) {
  for (double v : {s.wip, s.inv, s.labor, s.vac, s.backlog, s.material, s.material_pipeline, s.adj_wip, s.adj_prod,
                   s.adj_labor, s.adj_vac, s.inv_cov, s.price})
    if (!std::isfinite(v)) return false;
  return true;
}

double draw_in(Rng& rng, const strategy::Level& l, bool random) { return random ? uniform(rng, l.lo, l.hi) : l.mid(); }

}  // namespace

void CostRates::validate() const {
  for (double v : {production, raw_material, holding, backlog, transport})
    if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("cost rates must be finite and >= 0");
}

void HybridConfig::validate() const {
  sd::validate(sd);
  abs::validate(market);
  costs.validate();
  if (days < 1) throw ParameterError("days must be >= 1");
  if (substeps < 1) throw ParameterError("substeps must be >= 1");
  if (!(consumption >= 0.0)) throw ParameterError("consumption must be >= 0");
  if (marketing_period < 1) throw ParameterError("marketing_period must be >= 1");
  if (!(initial_demand_fraction >= 0.0)) throw ParameterError("initial_demand_fraction must be >= 0");
  if (accounting_start < 0 || accounting_start >= days)
    throw ParameterError("accounting_start must lie in [0, days)");
}

HybridConfig HybridConfig::zero_noise() const {
  HybridConfig c = *this;
  c.sd.sigma_wip = c.sd.sigma_prod = c.sd.sigma_order = c.sd.sigma_inv = 0.0;
  c.random_marketing = false;
  return c;
}

sd::SDParams company_params(const sd::SDParams& base, const strategy::CompanyStrategy& s) {
  sd::SDParams p = base;
  p.vacancy_creation_time = s[Factor::vacancy_creation_time].mid();
  p.layoff_time = s[Factor::layoff_time].mid();
  p.labor_fulfill_time = s[Factor::labor_fulfill_time].mid();
  p.wip_fulfill_time = s[Factor::wip_fulfill_time].mid();
  p.inv_fulfill_time = s[Factor::inv_fulfill_time].mid();
  p.material_lead_time = s[Factor::material_lead_time].mid();
  p.safety_stock_cov = s[Factor::safety_stock_cov].mid();
  p.material_inv_cov = s[Factor::material_inv_cov].mid();
  p.psens_cost = s[Factor::psens_cost].mid();
  p.psens_inv = s[Factor::psens_inv].mid();
  p.mfg_price = s[Factor::mfg_price].mid();
  return p;
}

CostBreakdown cost_breakdown(const ReplicationOutput& rep, const CostRates& rates, std::size_t company,
                             SunkCostMode mode) {
  const Totals& t = rep.totals.at(company);
  CostBreakdown c{};
  c.revenue = t.revenue;
  c.production = rates.production * t.completed;
  c.raw_material = rates.raw_material * t.material;
  c.inventory = rates.holding * t.inventory;
  c.backlog = rates.backlog * t.backlog;
  c.transport = rates.transport * t.shipped;
  c.marketing = t.marketing;
  c.sunk = mode == SunkCostMode::total ? rep.totals[0].sunk + rep.totals[1].sunk : t.sunk;
  return c;
}

std::array<double, 2> compute_payoff(const ReplicationOutput& rep, const CostRates& rates, SunkCostMode mode) {
  return {cost_breakdown(rep, rates, 0, mode).payoff(), cost_breakdown(rep, rates, 1, mode).payoff()};
}

ReplicationOutput run_replication(const std::array<strategy::CompanyStrategy, 2>& companies,
                                  const HybridConfig& config, std::uint64_t seed, bool mirrored) {
  config.validate();
  const double dt = config.dt();
  const double tor = config.total_order_rate();

  std::array<sd::SDParams, 2> params;
  for (std::size_t i = 0; i < 2; ++i) {
    params[i] = company_params(config.sd, companies[i]);
    sd::validate(params[i]);
    for (Factor f : {Factor::marketing_budget, Factor::promotion_depth, Factor::advertising}) {
      const auto& l = companies[i][f];
      if (!(l.lo >= 0.0 && l.hi <= 1.0 && l.lo <= l.hi))
        throw ConfigError(std::string(strategy::name(f)), "must lie within [0, 1]");
    }
  }

  abs::MarketParams mp = config.market;
  if (mirrored) std::swap(mp.delta[0], mp.delta[1]);
  abs::Market market(mp, derive_seed(seed, {kNetwork}), derive_seed(seed, {kAgents}), derive_seed(seed, {kTies}),
                     mirrored);

  std::array<Rng, 2> noise_rng, marketing_rng;
  for (std::size_t i = 0; i < 2; ++i) {
    const std::uint64_t slot = mirrored ? 1 - i : i;
    noise_rng[i].seed(derive_seed(seed, {kNoise, slot}));
    marketing_rng[i].seed(derive_seed(seed, {kMarketing, slot}));
  }

  std::array<sd::SDState, 2> state;
  for (std::size_t i = 0; i < 2; ++i)
    state[i] = sd::steady_state(params[i], config.initial_demand_fraction * tor * 0.5);

  sd::PricingState pricing;
  pricing.market_price = 0.5 * (params[0].mfg_price + params[1].mfg_price);
  auto reprice = [&](double step) {
    const std::array<sd::PricingInputs, 2> in{sd::pricing_inputs(params[0], state[0].inv_cov),
                                              sd::pricing_inputs(params[1], state[1].inv_cov)};
    auto [prices, next] = sd::step_pricing(pricing, in, config.sd.price_adjust_time, step);
    state[0].price = prices[0];
    state[1].price = prices[1];
    return next;
  };
  // prices at t=0 from the initial market price, without advancing it
  pricing = [&] {
    auto next = reprice(dt);
    next.market_price = pricing.market_price;
    next.change_rate = 0.0;
    return next;
  }();

  ReplicationOutput out;
  out.seed = seed;
  out.days = config.days;
  out.mirrored = mirrored;
  for (auto& s : out.series)
    for (auto* v : {&s.price, &s.inv, &s.backlog, &s.ship, &s.share, &s.labor, &s.wip, &s.material})
      v->reserve(static_cast<std::size_t>(config.days));

  std::array<abs::BrandInputs, 2> brand{};
  std::array<double, 2> period_revenue{0.0, 0.0};
  std::array<double, 2> budget_pct{companies[0][Factor::marketing_budget].mid(),
                                   companies[1][Factor::marketing_budget].mid()};

  for (int day = 0; day < config.days; ++day) {
    const bool counted = day >= config.accounting_start;
    if (day % config.marketing_period == 0) {
      for (std::size_t i = 0; i < 2; ++i) {
        const double base = day == 0 ? state[i].price * tor * config.marketing_period : period_revenue[i];
        brand[i].budget = budget_pct[i] * base;
        brand[i].ad = draw_in(marketing_rng[i], companies[i][Factor::advertising], config.random_marketing);
        brand[i].pm = draw_in(marketing_rng[i], companies[i][Factor::promotion_depth], config.random_marketing);
        period_revenue[i] = 0.0;
      }
    }
    for (std::size_t i = 0; i < 2; ++i) brand[i].price = state[i].price;

    const abs::StepResult shares = market.step(brand);
    const abs::MarketingState& ms = market.marketing();
    if (!std::isfinite(ms.inter[0]) || !std::isfinite(ms.inter[1]))
      throw ReplicationError(day, seed, "marketing co-state is not finite");

    std::array<sd::SDNoise, 2> noise{};
    for (std::size_t i = 0; i < 2; ++i) {
      noise[i].order = normal(noise_rng[i], config.sd.sigma_order);
      noise[i].inv = normal(noise_rng[i], config.sd.sigma_inv);
      noise[i].wip = normal(noise_rng[i], config.sd.sigma_wip);
      noise[i].prod = normal(noise_rng[i], config.sd.sigma_prod);
    }

    std::array<double, 2> shipped_today{0.0, 0.0};
    try {
      for (int k = 0; k < config.substeps; ++k) {
        for (std::size_t i = 0; i < 2; ++i) {
          sd::CompanyRates r;
          const sd::SDState before = state[i];
          state[i] = sd::step_company(before, params[i], tor * shares.shares[i], noise[i], dt, &r);
          const double revenue = r.ship * before.price * dt;
          period_revenue[i] += revenue;
          shipped_today[i] += r.ship * dt;
          if (counted) {
            Totals& t = out.totals[i];
            t.revenue += revenue;
            t.completed += r.prod_complete * dt;
            t.material += r.material_arrival * dt;
            t.inventory += before.inv * dt;
            t.backlog += before.backlog * dt;
            t.shipped += r.ship * dt;
            t.marketing += ms.spend[i].rate * dt;
          }
        }
        pricing = reprice(dt);
      }
    } catch (const StateError& e) {
      throw ReplicationError(day, seed, e.what());
    }

    for (std::size_t i = 0; i < 2; ++i) {
      if (!finite_state(state[i])) throw ReplicationError(day, seed, "supply chain state is not finite");
      if (counted)
        out.totals[i].sunk += brand[i].budget * std::fabs(ms.inter[i]) / static_cast<double>(config.marketing_period);
      CompanySeries& s = out.series[i];
      s.price.push_back(state[i].price);
      s.inv.push_back(state[i].inv);
      s.backlog.push_back(state[i].backlog);
      s.ship.push_back(shipped_today[i]);
      s.share.push_back(shares.shares[i]);
      s.labor.push_back(state[i].labor);
      s.wip.push_back(state[i].wip);
      s.material.push_back(state[i].material);
    }
    if (!std::isfinite(pricing.market_price)) throw ReplicationError(day, seed, "market price is not finite");
    out.market_price.push_back(pricing.market_price);
  }
  out.warmup_days = detect_warmup(out);
  return out;
}

std::vector<double> trailing_mean(const std::vector<double>& v, int window) {
  if (window < 1) throw ParameterError("window must be >= 1");
  std::vector<double> out(v.size());
  double acc = 0.0;
  for (std::size_t d = 0; d < v.size(); ++d) {
    acc += v[d];
    if (d >= static_cast<std::size_t>(window)) acc -= v[d - static_cast<std::size_t>(window)];
    out[d] = acc / static_cast<double>(std::min<std::size_t>(d + 1, static_cast<std::size_t>(window)));
  }
  return out;
}

int detect_warmup(const ReplicationOutput& rep, double tolerance, int window) {
  int warm = 0;
  for (const CompanySeries& s : rep.series) {
    for (const std::vector<double>* v : {&s.wip, &s.inv, &s.labor, &s.material}) {
      if (v->empty()) continue;
      const auto avg = trailing_mean(*v, window);
      const double final_value = avg.back();
      const double band = tolerance * std::fabs(final_value);
      for (std::size_t d = avg.size(); d-- > 0;) {
        if (std::fabs(avg[d] - final_value) > band) {
          warm = std::max(warm, static_cast<int>(d) + 1);
          break;
        }
      }
    }
  }
  return warm;
}

std::uint64_t replication_seed(std::uint64_t stream, std::uint64_t id) { return derive_seed(stream, {id}); }

game::PayoffSamples estimate_payoffs(const std::array<strategy::CompanyStrategy, 2>& companies, std::size_t n,
                                     const HybridConfig& config, std::uint64_t stream, std::uint64_t first_id,
                                     unsigned jobs) {
  if (n == 0) throw ParameterError("n must be >= 1");
  std::vector<std::array<double, 2>> payoff(n);
  parallel_for(n, jobs, [&](std::size_t k) {
    const auto rep = run_replication(companies, config, replication_seed(stream, first_id + k));
    payoff[k] = compute_payoff(rep, config.costs, config.sunk_cost);
  });
  game::PayoffSamples out;
  for (std::size_t k = 0; k < n; ++k) out.add(first_id + k, payoff[k][0], payoff[k][1]);
  return out;
}

}  // namespace duopoly::hybrid
