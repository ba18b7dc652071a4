#include "duopoly/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "duopoly/error.hpp"

namespace duopoly::config {

using nlohmann::json;
using strategy::Factor;
using strategy::Level;

namespace {

json level_json(const Level& l) { return l.lo == l.hi ? json(l.lo) : json::array({l.lo, l.hi}); }

json factor_list_json(const std::vector<strategy::ActiveFactor>& fs) {
  json a = json::array();
  for (const auto& f : fs) a.push_back({{"factor", std::string(strategy::name(f.factor))}, {"levels", f.levels}});
  return a;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

// Overlays `user` onto `base`; objects merge key by key, everything else is replaced.
void overlay(json& base, const json& user, const std::string& path) {
  if (!user.is_object()) throw ConfigError(path, "expected an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string p = join(path, it.key());
    if (!base.contains(it.key())) throw ConfigError(p, "unknown key");
    json& slot = base[it.key()];
    if (slot.is_object())
      overlay(slot, it.value(), p);
    else
      slot = it.value();
  }
}

double num(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

double positive(const json& j, const std::string& path) {
  const double v = num(j, path);
  if (!(v > 0.0)) throw ConfigError(path, "must be > 0");
  return v;
}

double nonnegative(const json& j, const std::string& path) {
  const double v = num(j, path);
  if (!(v >= 0.0)) throw ConfigError(path, "must be >= 0");
  return v;
}

double within(const json& j, const std::string& path, double lo, double hi) {
  const double v = num(j, path);
  if (!(v >= lo && v <= hi)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "must lie in [%g, %g]", lo, hi);
    throw ConfigError(path, buf);
  }
  return v;
}

long long integer(const json& j, const std::string& path, long long lo) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  const long long v = j.get<long long>();
  if (v < lo) throw ConfigError(path, "must be >= " + std::to_string(lo));
  return v;
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  return j.get<bool>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

// Admissible interval of a detailed factor's values.
std::pair<double, double> factor_bounds(Factor f) {
  switch (f) {
    case Factor::psens_cost: return {0.0, 1.0};
    case Factor::psens_inv: return {-1.0, 0.0};
    case Factor::marketing_budget:
    case Factor::promotion_depth:
    case Factor::advertising: return {0.0, 1.0};
    default: return {1e-9, 1e9};
  }
}

Level level_value(const json& j, Factor f, const std::string& path) {
  const auto [lo, hi] = factor_bounds(f);
  Level l;
  if (j.is_array()) {
    if (j.size() != 2) throw ConfigError(path, "expected a number or a [low, high] range");
    l.lo = within(j[0], index(path, 0), lo, hi);
    l.hi = within(j[1], index(path, 1), lo, hi);
    if (l.lo > l.hi) throw ConfigError(path, "range low exceeds high");
  } else {
    l.lo = l.hi = within(j, path, lo, hi);
  }
  return l;
}

std::vector<strategy::ActiveFactor> factor_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected a list of factors");
  std::vector<strategy::ActiveFactor> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = index(path, i);
    const json& e = j[i];
    if (!e.is_object()) throw ConfigError(p, "expected {\"factor\": ..., \"levels\": 2|4}");
    for (auto it = e.begin(); it != e.end(); ++it)
      if (it.key() != "factor" && it.key() != "levels") throw ConfigError(join(p, it.key()), "unknown key");
    if (!e.contains("factor")) throw ConfigError(join(p, "factor"), "missing");
    const std::string name = text(e["factor"], join(p, "factor"));
    const auto f = strategy::parse_factor(name);
    if (!f) throw ConfigError(join(p, "factor"), "unknown factor '" + name + "'");
    const long long lv = e.contains("levels") ? integer(e["levels"], join(p, "levels"), 2) : 2;
    if (lv != 2 && lv != 4) throw ConfigError(join(p, "levels"), "must be 2 or 4");
    out.push_back({*f, static_cast<int>(lv)});
  }
  return out;
}

std::optional<int> level_name(const std::string& s) {
  for (std::size_t i = 0; i < strategy::kLevelNames.size(); ++i)
    if (s == strategy::kLevelNames[i]) return static_cast<int>(i);
  return std::nullopt;
}

strategy::CompanyStrategy company(const json& j, const strategy::FactorTable& table, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object of factor settings");
  const strategy::CompanyStrategy base = strategy::baseline(table);
  strategy::CompanyStrategy out = base;
  std::array<bool, strategy::kDetailedFactors> set{};
  auto mark = [&](Factor f, const std::string& p) {
    for (Factor c : strategy::components(f)) {
      if (set[static_cast<std::size_t>(c)]) throw ConfigError(p, "factor '" + std::string(strategy::name(c)) +
                                                                      "' is set more than once");
      set[static_cast<std::size_t>(c)] = true;
    }
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string p = join(path, it.key());
    const auto f = strategy::parse_factor(it.key());
    if (!f) throw ConfigError(p, "unknown factor");
    mark(*f, p);
    if (it.value().is_string()) {
      const std::string v = it.value().get<std::string>();
      if (v == "base") {
        for (Factor c : strategy::components(*f)) out[c] = base[c];
      } else if (const auto lv = level_name(v)) {
        strategy::apply_level(out, table, *f, *lv);
      } else {
        throw ConfigError(p, "expected L, ML, MH, H or base");
      }
    } else {
      if (strategy::is_aggregate(*f)) throw ConfigError(p, "aggregate factors take a level name");
      out[*f] = level_value(it.value(), *f, p);
    }
  }
  for (std::size_t i = 0; i < strategy::kDetailedFactors; ++i)
    if (!set[i])
      throw ConfigError(join(path, std::string(strategy::name(static_cast<Factor>(i)))), "missing factor in profile");
  return out;
}

json company_json(const strategy::CompanyStrategy& c) {
  json o = json::object();
  for (std::size_t i = 0; i < strategy::kDetailedFactors; ++i)
    o[std::string(strategy::name(static_cast<Factor>(i)))] = level_json(c.values[i]);
  return o;
}

template <class F>
void rethrow_as_config(F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("", e.what());
  }
}

}  // namespace

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.profile = {strategy::baseline(c.gsa.table), strategy::baseline(c.gsa.table)};
  return c;
}

json default_config_json() {
  json j = to_json(default_config());
  // baseline resolved against whatever factor table the user supplies
  const json base = {{"manufacturing", "base"}, {"logistics", "base"}, {"pricing", "base"}, {"marketing", "base"}};
  j["profile"] = json::array({base, base});
  return j;
}

json to_json(const ExperimentConfig& c) {
  const auto& s = c.sim;
  const auto& sd = s.sd;
  const auto& m = s.market;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["seed"] = c.gsa.seed;
  j["jobs"] = c.gsa.jobs;
  j["out"] = c.out;
  j["replications"] = c.replications;
  j["simulation"] = {
      {"days", s.days},
      {"substeps", s.substeps},
      {"consumption", s.consumption},
      {"marketing_period", s.marketing_period},
      {"initial_demand_fraction", s.initial_demand_fraction},
      {"random_marketing", s.random_marketing},
      {"sunk_cost", s.sunk_cost == hybrid::SunkCostMode::total ? "total" : "own_term"},
      {"accounting_start", s.accounting_start},
      {"costs",
       {{"production", s.costs.production},
        {"raw_material", s.costs.raw_material},
        {"holding", s.costs.holding},
        {"backlog", s.costs.backlog},
        {"transport", s.costs.transport}}},
      {"supply_chain",
       {{"cycle_time", sd.cycle_time},
        {"vacancy_fill_time", sd.vacancy_fill_time},
        {"employment_time", sd.employment_time},
        {"order_process_time", sd.order_process_time},
        {"labor_productivity", sd.labor_productivity},
        {"labor_hours", sd.labor_hours},
        {"max_inv_cov", sd.max_inv_cov},
        {"max_layoff_rate", sd.max_layoff_rate},
        {"material_adjust_time", sd.material_adjust_time},
        {"min_inv_cov", sd.min_inv_cov},
        {"price_adjust_time", sd.price_adjust_time},
        {"smooth_wip", sd.smooth_wip},
        {"smooth_prod", sd.smooth_prod},
        {"smooth_labor", sd.smooth_labor},
        {"smooth_vac", sd.smooth_vac},
        {"sigma_wip", sd.sigma_wip},
        {"sigma_prod", sd.sigma_prod},
        {"sigma_order", sd.sigma_order},
        {"sigma_inv", sd.sigma_inv}}},
      {"market",
       {{"agents", m.agents},
        {"seed_nodes", m.seed_nodes},
        {"edges_per_node", m.edges_per_node},
        {"weights", m.weights},
        {"rho", m.rho},
        {"delta", m.delta},
        {"init_ad", m.init_ad},
        {"init_pm", m.init_pm},
        {"init_ft", m.init_ft},
        {"price_base", m.price_base},
        {"socio_low", m.socio_low},
        {"socio_high", m.socio_high},
        {"budget_factor", m.budget_factor},
        {"spend_adjust_time", m.spend_adjust_time},
        {"costate_dt", m.costate_dt},
        {"average_price_sum", m.average_price_sum}}},
  };
  json factors = json::object();
  for (std::size_t i = 0; i < strategy::kDetailedFactors; ++i) {
    json row = json::array();
    for (const Level& l : c.gsa.table.levels[i]) row.push_back(level_json(l));
    factors[std::string(strategy::name(static_cast<Factor>(i)))] = row;
  }
  j["factors"] = factors;
  const auto& sp = c.gsa.sampling;
  j["sampling"] = {{"initial", sp.initial}, {"trim", sp.trim},           {"cap", sp.cap},
                   {"ecvi_limit", sp.ecvi_limit}, {"batch", sp.batch}, {"alpha", sp.alpha}};
  json schedule = json::array();
  for (const auto& it : c.gsa.schedule) schedule.push_back(factor_list_json(it));
  j["gsa"] = {
      {"schedule", schedule},
      {"initial", factor_list_json(c.gsa.initial)},
      {"max_iterations", c.gsa.max_iterations},
      {"max_strategies", c.gsa.max_strategies},
      {"epsilon", c.gsa.epsilon},
      {"neighbors", c.gsa.neighbors},
      {"top_up", c.gsa.top_up},
      {"tolerance_grid", c.gsa.tolerances()},
      {"replication_budget", c.gsa.replication_budget},
      {"stability",
       {{"steps", c.gsa.stability.steps},
        {"window_fraction", c.gsa.stability.window_fraction},
        {"rule", std::string(gsa::name(c.gsa.stability.rule))},
        {"noisy", c.gsa.stability.noisy}}},
  };
  j["profile"] = json::array({company_json(c.profile[0]), company_json(c.profile[1])});
  return j;
}

ExperimentConfig parse_config(const json& user) {
  if (!user.is_object()) throw ConfigError("", "configuration must be a JSON object");
  if (!user.contains("schema_version")) throw ConfigError("schema_version", "missing");
  if (integer(user["schema_version"], "schema_version", 0) != kSchemaVersion)
    throw ConfigError("schema_version", "unsupported version, expected " + std::to_string(kSchemaVersion));

  json j = default_config_json();
  overlay(j, user, "");

  ExperimentConfig c;
  c.gsa.seed = static_cast<std::uint64_t>(integer(j["seed"], "seed", 0));
  c.gsa.jobs = static_cast<unsigned>(integer(j["jobs"], "jobs", 1));
  c.out = text(j["out"], "out");
  c.replications = static_cast<std::size_t>(integer(j["replications"], "replications", 1));

  {
    const json& s = j["simulation"];
    auto& h = c.sim;
    h.days = static_cast<int>(integer(s["days"], "simulation.days", 1));
    h.substeps = static_cast<int>(integer(s["substeps"], "simulation.substeps", 1));
    h.consumption = positive(s["consumption"], "simulation.consumption");
    h.marketing_period = static_cast<int>(integer(s["marketing_period"], "simulation.marketing_period", 1));
    h.initial_demand_fraction = positive(s["initial_demand_fraction"], "simulation.initial_demand_fraction");
    h.random_marketing = boolean(s["random_marketing"], "simulation.random_marketing");
    const std::string sc = text(s["sunk_cost"], "simulation.sunk_cost");
    if (sc == "total")
      h.sunk_cost = hybrid::SunkCostMode::total;
    else if (sc == "own_term")
      h.sunk_cost = hybrid::SunkCostMode::own_term;
    else
      throw ConfigError("simulation.sunk_cost", "expected total or own_term");
    h.accounting_start = static_cast<int>(integer(s["accounting_start"], "simulation.accounting_start", 0));
    if (h.accounting_start >= h.days) throw ConfigError("simulation.accounting_start", "must be < days");

    const json& k = s["costs"];
    h.costs.production = nonnegative(k["production"], "simulation.costs.production");
    h.costs.raw_material = nonnegative(k["raw_material"], "simulation.costs.raw_material");
    h.costs.holding = nonnegative(k["holding"], "simulation.costs.holding");
    h.costs.backlog = nonnegative(k["backlog"], "simulation.costs.backlog");
    h.costs.transport = nonnegative(k["transport"], "simulation.costs.transport");

    const json& d = s["supply_chain"];
    const std::string sp = "simulation.supply_chain.";
    auto& sd = h.sd;
    sd.cycle_time = positive(d["cycle_time"], sp + "cycle_time");
    sd.vacancy_fill_time = positive(d["vacancy_fill_time"], sp + "vacancy_fill_time");
    sd.employment_time = positive(d["employment_time"], sp + "employment_time");
    sd.order_process_time = positive(d["order_process_time"], sp + "order_process_time");
    sd.labor_productivity = positive(d["labor_productivity"], sp + "labor_productivity");
    sd.labor_hours = positive(d["labor_hours"], sp + "labor_hours");
    sd.max_inv_cov = nonnegative(d["max_inv_cov"], sp + "max_inv_cov");
    sd.max_layoff_rate = nonnegative(d["max_layoff_rate"], sp + "max_layoff_rate");
    sd.material_adjust_time = positive(d["material_adjust_time"], sp + "material_adjust_time");
    sd.min_inv_cov = positive(d["min_inv_cov"], sp + "min_inv_cov");
    sd.price_adjust_time = positive(d["price_adjust_time"], sp + "price_adjust_time");
    sd.smooth_wip = within(d["smooth_wip"], sp + "smooth_wip", 0.0, 1.0);
    sd.smooth_prod = within(d["smooth_prod"], sp + "smooth_prod", 0.0, 1.0);
    sd.smooth_labor = within(d["smooth_labor"], sp + "smooth_labor", 0.0, 1.0);
    sd.smooth_vac = within(d["smooth_vac"], sp + "smooth_vac", 0.0, 1.0);
    sd.sigma_wip = nonnegative(d["sigma_wip"], sp + "sigma_wip");
    sd.sigma_prod = nonnegative(d["sigma_prod"], sp + "sigma_prod");
    sd.sigma_order = nonnegative(d["sigma_order"], sp + "sigma_order");
    sd.sigma_inv = nonnegative(d["sigma_inv"], sp + "sigma_inv");

    const json& mk = s["market"];
    const std::string mp = "simulation.market.";
    auto& m = h.market;
    m.agents = static_cast<std::size_t>(integer(mk["agents"], mp + "agents", 2));
    m.seed_nodes = static_cast<std::size_t>(integer(mk["seed_nodes"], mp + "seed_nodes", 1));
    m.edges_per_node = static_cast<std::size_t>(integer(mk["edges_per_node"], mp + "edges_per_node", 1));
    if (!mk["weights"].is_array() || mk["weights"].size() != 3) throw ConfigError(mp + "weights", "expected 3 numbers");
    for (std::size_t i = 0; i < 3; ++i) m.weights[i] = num(mk["weights"][i], index(mp + "weights", i));
    m.rho = num(mk["rho"], mp + "rho");
    if (!mk["delta"].is_array() || mk["delta"].size() != 2) throw ConfigError(mp + "delta", "expected 2 numbers");
    for (std::size_t i = 0; i < 2; ++i) m.delta[i] = num(mk["delta"][i], index(mp + "delta", i));
    m.init_ad = within(mk["init_ad"], mp + "init_ad", 0.0, 1.0);
    m.init_pm = within(mk["init_pm"], mp + "init_pm", 0.0, 1.0);
    m.init_ft = within(mk["init_ft"], mp + "init_ft", 0.0, 1.0);
    m.price_base = positive(mk["price_base"], mp + "price_base");
    m.socio_low = nonnegative(mk["socio_low"], mp + "socio_low");
    m.socio_high = nonnegative(mk["socio_high"], mp + "socio_high");
    if (m.socio_low > m.socio_high) throw ConfigError(mp + "socio_low", "must not exceed socio_high");
    m.budget_factor = nonnegative(mk["budget_factor"], mp + "budget_factor");
    m.spend_adjust_time = positive(mk["spend_adjust_time"], mp + "spend_adjust_time");
    m.costate_dt = positive(mk["costate_dt"], mp + "costate_dt");
    m.average_price_sum = boolean(mk["average_price_sum"], mp + "average_price_sum");
    if (m.seed_nodes > m.agents) throw ConfigError(mp + "seed_nodes", "must not exceed agents");
    if (m.edges_per_node > m.seed_nodes) throw ConfigError(mp + "edges_per_node", "must not exceed seed_nodes");
  }

  for (std::size_t i = 0; i < strategy::kDetailedFactors; ++i) {
    const Factor f = static_cast<Factor>(i);
    const std::string p = join("factors", std::string(strategy::name(f)));
    const json& row = j["factors"][std::string(strategy::name(f))];
    if (!row.is_array() || row.size() != 4) throw ConfigError(p, "expected four levels (L, ML, MH, H)");
    for (std::size_t k = 0; k < 4; ++k) c.gsa.table.levels[i][k] = level_value(row[k], f, index(p, k));
  }

  {
    const json& s = j["sampling"];
    auto& sp = c.gsa.sampling;
    sp.initial = static_cast<std::size_t>(integer(s["initial"], "sampling.initial", 2));
    sp.trim = static_cast<std::size_t>(integer(s["trim"], "sampling.trim", 0));
    sp.cap = static_cast<std::size_t>(integer(s["cap"], "sampling.cap", 2));
    sp.ecvi_limit = nonnegative(s["ecvi_limit"], "sampling.ecvi_limit");
    sp.batch = static_cast<std::size_t>(integer(s["batch"], "sampling.batch", 1));
    sp.alpha = num(s["alpha"], "sampling.alpha");
    if (!(sp.alpha > 0.0 && sp.alpha < 1.0)) throw ConfigError("sampling.alpha", "must lie in (0, 1)");
    if (2 * sp.trim + 2 > sp.initial) throw ConfigError("sampling.trim", "must leave at least two samples after trimming");
    if (sp.cap < sp.initial - 2 * sp.trim) throw ConfigError("sampling.cap", "must be >= the trimmed initial sample size");
  }

  {
    const json& g = j["gsa"];
    auto& gc = c.gsa;
    if (!g["schedule"].is_array()) throw ConfigError("gsa.schedule", "expected a list of iterations");
    gc.schedule.clear();
    for (std::size_t i = 0; i < g["schedule"].size(); ++i)
      gc.schedule.push_back(factor_list(g["schedule"][i], index("gsa.schedule", i)));
    gc.initial = factor_list(g["initial"], "gsa.initial");
    gc.max_iterations = static_cast<std::size_t>(integer(g["max_iterations"], "gsa.max_iterations", 1));
    gc.max_strategies = static_cast<std::size_t>(integer(g["max_strategies"], "gsa.max_strategies", 2));
    gc.epsilon = nonnegative(g["epsilon"], "gsa.epsilon");
    gc.neighbors = static_cast<std::size_t>(integer(g["neighbors"], "gsa.neighbors", 0));
    gc.top_up = boolean(g["top_up"], "gsa.top_up");
    if (!g["tolerance_grid"].is_array()) throw ConfigError("gsa.tolerance_grid", "expected a list of numbers");
    gc.tolerance_grid.clear();
    for (std::size_t i = 0; i < g["tolerance_grid"].size(); ++i)
      gc.tolerance_grid.push_back(nonnegative(g["tolerance_grid"][i], index("gsa.tolerance_grid", i)));
    gc.replication_budget = static_cast<std::size_t>(integer(g["replication_budget"], "gsa.replication_budget", 0));
    const json& st = g["stability"];
    gc.stability.steps = static_cast<std::size_t>(integer(st["steps"], "gsa.stability.steps", 1));
    gc.stability.window_fraction = num(st["window_fraction"], "gsa.stability.window_fraction");
    if (!(gc.stability.window_fraction > 0.0 && gc.stability.window_fraction <= 1.0))
      throw ConfigError("gsa.stability.window_fraction", "must lie in (0, 1]");
    const std::string rule = text(st["rule"], "gsa.stability.rule");
    if (rule == "alternating")
      gc.stability.rule = gsa::UpdateRule::alternating;
    else if (rule == "simultaneous")
      gc.stability.rule = gsa::UpdateRule::simultaneous;
    else
      throw ConfigError("gsa.stability.rule", "expected alternating or simultaneous");
    gc.stability.noisy = boolean(st["noisy"], "gsa.stability.noisy");
    if (gc.schedule.empty() && gc.initial.empty())
      throw ConfigError("gsa.schedule", "either a schedule or initial factors are required");
    for (std::size_t i = 0; i < gc.schedule.size(); ++i) {
      if (gc.schedule[i].empty()) throw ConfigError(index("gsa.schedule", i), "an iteration needs at least one factor");
      try {
        strategy::design(gc.schedule[i], gc.max_strategies);
      } catch (const DesignError& e) {
        throw ConfigError(index("gsa.schedule", i), e.what());
      }
    }
  }

  if (!j["profile"].is_array() || j["profile"].size() != 2) throw ConfigError("profile", "expected two companies");
  for (std::size_t i = 0; i < 2; ++i) c.profile[i] = company(j["profile"][i], c.gsa.table, index("profile", i));

  rethrow_as_config([&] {
    c.sim.validate();
    c.gsa.validate();
  });
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw ConfigError("", path + " is empty");
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", path + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace duopoly::config
