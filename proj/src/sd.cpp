#include "duopoly/sd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "duopoly/error.hpp"

namespace duopoly::sd {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(name) + " must be > 0");
}

void require_fraction(double v, const char* name) {
  if (!(v > 0.0 && v <= 1.0)) throw ParameterError(std::string(name) + " must lie in (0, 1]");
}

void require_stock(double v, const char* name) {
  if (!std::isfinite(v)) throw StateError(std::string(name) + " is not finite");
  if (v < 0.0) throw StateError(std::string(name) + " is negative");
}

double ratio_or_unit(double have, double want) {
  if (want > 0.0) return fulfillment_ratio(have, want);
  return have > 0.0 ? 1.0 : 0.0;
}

enum class Scope { production, logistics, all };

SDState integrate(const SDState& s, const CompanyRates& r, double dt, Scope scope) {
  SDState n = s;
  const bool prod = scope != Scope::logistics;
  const bool logi = scope != Scope::production;
  if (prod) {
    n.wip = s.wip + (r.prod_begin - r.prod_complete) * dt;
    n.labor = s.labor + (r.hire - r.retire - r.layoff) * dt;
    n.vac = s.vac + (r.vac_begin - r.hire) * dt;
    n.adj_wip = r.adj_wip;
    n.adj_prod = r.adj_prod;
    n.adj_labor = r.adj_labor;
    n.adj_vac = r.adj_vac;
  }
  if (prod && logi) {
    n.material = s.material + (r.material_arrival - r.prod_begin) * dt;
  } else if (prod) {
    n.material = s.material - r.prod_begin * dt;
  } else {
    n.material = s.material + r.material_arrival * dt;
  }
  if (logi) {
    n.inv = s.inv + (r.prod_complete - r.ship) * dt;
    n.backlog = s.backlog + (r.order - r.ship) * dt;
    n.material_pipeline = s.material_pipeline + (r.material_order - r.material_arrival) * dt;
    n.inv_cov = r.inv_cov;
  }
  // Exact-zero residue from cancellation is clipped; outflow limits keep this at rounding level.
  for (double* x : {&n.wip, &n.labor, &n.vac, &n.material, &n.inv, &n.backlog, &n.material_pipeline})
    if (*x < 0.0) *x = 0.0;
  return n;
}

}  // namespace

void validate(const SDParams& p) {
  require_positive(p.vacancy_creation_time, "vacancy_creation_time");
  require_positive(p.layoff_time, "layoff_time");
  require_positive(p.labor_fulfill_time, "labor_fulfill_time");
  require_positive(p.wip_fulfill_time, "wip_fulfill_time");
  require_positive(p.inv_fulfill_time, "inv_fulfill_time");
  require_positive(p.material_lead_time, "material_lead_time");
  require_positive(p.safety_stock_cov, "safety_stock_cov");
  require_positive(p.material_inv_cov, "material_inv_cov");
  require_positive(p.mfg_price, "mfg_price");
  require_positive(p.cycle_time, "cycle_time");
  require_positive(p.vacancy_fill_time, "vacancy_fill_time");
  require_positive(p.employment_time, "employment_time");
  require_positive(p.order_process_time, "order_process_time");
  require_positive(p.labor_productivity, "labor_productivity");
  require_positive(p.labor_hours, "labor_hours");
  require_positive(p.material_adjust_time, "material_adjust_time");
  require_positive(p.min_inv_cov, "min_inv_cov");
  require_positive(p.price_adjust_time, "price_adjust_time");
  if (!(p.psens_cost >= 0.0 && p.psens_cost <= 1.0)) throw ParameterError("psens_cost must lie in [0, 1]");
  if (!(p.psens_inv >= -1.0 && p.psens_inv <= 0.0)) throw ParameterError("psens_inv must lie in [-1, 0]");
  require_fraction(p.smooth_wip, "smooth_wip");
  require_fraction(p.smooth_prod, "smooth_prod");
  require_fraction(p.smooth_labor, "smooth_labor");
  require_fraction(p.smooth_vac, "smooth_vac");
  for (double sigma : {p.sigma_wip, p.sigma_prod, p.sigma_order, p.sigma_inv})
    if (!(sigma >= 0.0)) throw ParameterError("noise standard deviations must be >= 0");
  if (!std::isfinite(p.max_inv_cov) || !std::isfinite(p.max_layoff_rate))
    throw ParameterError("max_inv_cov and max_layoff_rate must be finite");
}

double effective_max_inv_cov(const SDParams& p) noexcept {
  return p.max_inv_cov > 0.0 ? p.max_inv_cov : p.order_process_time + p.safety_stock_cov;
}

double smooth_adjust(double desired, double actual, double fulfill_time, double prev_adjust, double lambda) {
  if (!(fulfill_time > 0.0)) throw ParameterError("fulfill_time must be > 0");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ParameterError("smoothing factor must lie in (0, 1]");
  return lambda * (desired - actual) / fulfill_time + (1.0 - lambda) * prev_adjust;
}

double fulfillment_ratio(double inv, double desired_inv) {
  if (!(desired_inv > 0.0)) throw ParameterError("desired inventory must be > 0");
  return std::clamp(inv / desired_inv, 0.0, 1.0);
}

CompanyRates compute_rates(const SDState& s, const SDParams& p, double order_rate, const SDNoise& noise,
                           double dt) {
  if (!(dt > 0.0)) throw ParameterError("dt must be > 0");
  require_stock(s.wip, "wip");
  require_stock(s.inv, "inv");
  require_stock(s.labor, "labor");
  require_stock(s.vac, "vac");
  require_stock(s.backlog, "backlog");
  require_stock(s.material, "material");
  require_stock(s.material_pipeline, "material_pipeline");
  if (!std::isfinite(order_rate) || order_rate < 0.0) throw StateError("order rate must be finite and >= 0");
  for (double a : {s.adj_wip, s.adj_prod, s.adj_labor, s.adj_vac, noise.wip, noise.prod, noise.order, noise.inv})
    if (!std::isfinite(a)) throw StateError("adjustment or noise term is not finite");

  CompanyRates r;
  r.order = std::max(0.0, order_rate + noise.order);

  // production planning
  r.desired_inv = std::max(0.0, (p.order_process_time + p.safety_stock_cov) * r.order + noise.inv);
  r.adj_prod = smooth_adjust(r.desired_inv, s.inv, p.inv_fulfill_time, s.adj_prod, p.smooth_prod);
  r.desired_wip = std::max(0.0, (r.adj_prod + r.order) * p.cycle_time + noise.wip);
  r.adj_wip = smooth_adjust(r.desired_wip, s.wip, p.wip_fulfill_time, s.adj_wip, p.smooth_wip);
  r.desired_prod_begin = r.adj_wip + r.adj_prod + r.order + noise.prod;

  // workforce
  const double per_worker = p.labor_productivity * p.labor_hours;
  r.desired_labor = std::max(0.0, r.desired_prod_begin) / per_worker;
  r.adj_labor = smooth_adjust(r.desired_labor, s.labor, p.labor_fulfill_time, s.adj_labor, p.smooth_labor);
  r.retire = s.labor / p.employment_time;
  r.desired_hire = r.retire + r.adj_labor;
  r.desired_vac = std::max(0.0, p.vacancy_fill_time * r.desired_hire);
  r.adj_vac = smooth_adjust(r.desired_vac, s.vac, p.vacancy_creation_time, s.adj_vac, p.smooth_vac);
  r.hire = s.vac / p.vacancy_fill_time;
  r.layoff = std::min(std::max(0.0, -r.adj_labor), s.labor / p.layoff_time);
  if (p.max_layoff_rate > 0.0) r.layoff = std::min(r.layoff, p.max_layoff_rate);
  r.vac_begin = std::max(0.0, r.desired_hire + r.adj_vac);

  // raw material tier mirrors the finished-goods logistics
  r.desired_material = p.material_inv_cov * r.order;
  r.material_supply = std::max(0.0, r.desired_prod_begin) * ratio_or_unit(s.material, r.desired_material);
  r.material_supply = std::min(r.material_supply, s.material / dt);

  const double capacity = s.labor * per_worker;
  r.prod_begin = std::max(0.0, std::min({capacity, r.material_supply, r.desired_prod_begin}));
  r.prod_complete = s.wip / p.cycle_time;

  // finished goods
  const double desired_ship = r.order + s.backlog / p.order_process_time;
  r.ship = desired_ship * ratio_or_unit(s.inv, r.desired_inv);

  const double supply_line_gap = p.material_lead_time * r.order - s.material_pipeline;
  r.material_order = std::max(
      0.0, r.order + (r.desired_material - s.material) / p.material_adjust_time + supply_line_gap / p.material_adjust_time);
  r.material_arrival = s.material_pipeline / p.material_lead_time;

  // outflow limits: nothing leaves a stock faster than it can be emptied within dt
  r.ship = std::min({r.ship, s.inv / dt, r.order + s.backlog / dt});
  r.prod_complete = std::min(r.prod_complete, s.wip / dt);
  r.hire = std::min(r.hire, s.vac / dt);
  r.material_arrival = std::min(r.material_arrival, s.material_pipeline / dt);
  const double labor_out = (r.retire + r.layoff) * dt;
  if (labor_out > s.labor && labor_out > 0.0) {
    const double scale = s.labor / labor_out;
    r.retire *= scale;
    r.layoff *= scale;
  }

  r.inv_cov = r.ship > 0.0 ? s.inv / r.ship : effective_max_inv_cov(p);
  return r;
}

SDState step_production(const SDState& s, const SDParams& p, double order_rate, const SDNoise& noise, double dt) {
  return integrate(s, compute_rates(s, p, order_rate, noise, dt), dt, Scope::production);
}

SDState step_logistics(const SDState& s, const SDParams& p, double order_rate, const SDNoise& noise, double dt) {
  return integrate(s, compute_rates(s, p, order_rate, noise, dt), dt, Scope::logistics);
}

SDState step_company(const SDState& s, const SDParams& p, double order_rate, const SDNoise& noise, double dt,
                     CompanyRates* rates_out) {
  const CompanyRates r = compute_rates(s, p, order_rate, noise, dt);
  if (rates_out) *rates_out = r;
  return integrate(s, r, dt, Scope::all);
}

SDState steady_state(const SDParams& p, double demand) {
  validate(p);
  if (!(demand >= 0.0)) throw ParameterError("demand must be >= 0");
  SDState s;
  s.inv = (p.order_process_time + p.safety_stock_cov) * demand;
  s.wip = demand * p.cycle_time;
  s.labor = demand / (p.labor_productivity * p.labor_hours);
  s.vac = std::max(0.0, p.vacancy_fill_time * (s.labor / p.employment_time));
  s.backlog = 0.0;
  s.material = p.material_inv_cov * demand;
  s.material_pipeline = p.material_lead_time * demand;
  s.inv_cov = demand > 0.0 ? s.inv / demand : effective_max_inv_cov(p);
  s.price = p.mfg_price;
  return s;
}

PricingInputs pricing_inputs(const SDParams& p, double inv_cov) noexcept {
  PricingInputs in;
  in.cost_anchor = p.mfg_price;
  in.inv_cov = inv_cov;
  in.max_inv_cov = effective_max_inv_cov(p);
  in.psens_cost = p.psens_cost;
  in.psens_inv = p.psens_inv;
  in.min_inv_cov = p.min_inv_cov;
  return in;
}

std::pair<std::array<double, 2>, PricingState> step_pricing(const PricingState& shared,
                                                            const std::array<PricingInputs, 2>& companies,
                                                            double adjust_time, double dt) {
  if (!(shared.market_price > 0.0) || !std::isfinite(shared.market_price))
    throw StateError("market expected price must be > 0");
  if (!(adjust_time > 0.0)) throw ParameterError("price adjustment time must be > 0");
  if (!(dt > 0.0)) throw ParameterError("dt must be > 0");

  PricingState next = shared;
  std::array<double, 2> prices{};
  for (std::size_t i = 0; i < 2; ++i) {
    const PricingInputs& c = companies[i];
    if (!(c.inv_cov >= 0.0)) throw StateError("inventory coverage must be >= 0");
    if (!(c.max_inv_cov > 0.0)) throw ParameterError("max_inv_cov must be > 0");
    const double mp = shared.market_price;
    next.cost_effect[i] = 1.0 + c.psens_cost * (c.cost_anchor / mp - 1.0);
    const double cov = std::max(c.inv_cov, c.min_inv_cov);
    next.inv_effect[i] = std::pow(cov / c.max_inv_cov, c.psens_inv);
    prices[i] = mp * next.cost_effect[i] * next.inv_effect[i];
  }
  next.change_rate = ((prices[0] + prices[1]) / 2.0 - shared.market_price) / adjust_time;
  next.market_price = shared.market_price + dt * next.change_rate;
  if (!(next.market_price > 0.0)) throw StateError("market expected price left the positive range");
  return {prices, next};
}

}  // namespace duopoly::sd
