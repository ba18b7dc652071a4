#include "duopoly/market.hpp"

#include <cmath>
#include <string>

#include "duopoly/error.hpp"
#include "duopoly/kernels.hpp"

namespace duopoly::abs {

void validate(const MarketParams& p) {
  if (p.agents == 0) throw ParameterError("market needs at least one agent");
  if (!(p.price_base > 1.0)) throw ParameterError("price parameter s must be > 1");
  if (!(p.socio_low <= p.socio_high)) throw ParameterError("socio_low must not exceed socio_high");
  if (!(p.spend_adjust_time > 0.0)) throw ParameterError("spend_adjust_time must be > 0");
  if (!(p.budget_factor >= 0.0)) throw ParameterError("budget_factor must be >= 0");
  if (!(p.costate_dt > 0.0 && p.costate_dt <= 1.0)) throw ParameterError("costate_dt must lie in (0, 1]");
  for (double v : {p.rho, p.delta[0], p.delta[1], p.init_ad, p.init_pm, p.init_ft, p.weights[0], p.weights[1],
                   p.weights[2]})
    if (!std::isfinite(v)) throw ParameterError("market parameters must be finite");
}

Spend marketing_spend(double budget, double ad, double pm, double k, double adjust_time) {
  if (!(adjust_time > 0.0)) throw ParameterError("spend adjustment time must be > 0");
  Spend s;
  s.ad = k * budget * ad;
  s.promo = k * budget * pm;
  s.rate = (s.ad + s.promo) / adjust_time;
  return s;
}

double marketing_force(double ad, double pm, double inter, const std::array<double, 3>& w) {
  return w[0] * ad + w[1] * pm + w[2] * ad * pm + inter;
}

Perception update_perceptions(double force, double i_a, double i_p, double i_f) {
  return {force * i_a, force * i_p, force * i_f};
}

std::array<double, 2> update_costate(const std::array<double, 2>& inter, double rho, double delta1, double delta2,
                                     double total_force, const std::array<double, 2>& prices,
                                     const std::array<double, 2>& pms, double dt) {
  if (!(dt > 0.0)) throw ParameterError("dt must be > 0");
  const double g = rho + total_force;
  const std::array<double, 2> d{delta1, delta2};
  std::array<double, 2> next{};
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t j = 1 - i;
    const double rate = d[i] * g * inter[i] + (d[i] * d[j]) * g * inter[j] - prices[i] * (1.0 - pms[i]);
    next[i] = inter[i] + dt * rate;
  }
  return next;
}

double sunk_cost(const std::array<double, 2>& budgets, const std::array<double, 2>& inters) {
  return budgets[0] * inters[0] + budgets[1] * inters[1];
}

double price_sensitivity(double price, double pm, double price_sum, double s, double m_agent) {
  if (!(s > 1.0)) throw ParameterError("price parameter s must be > 1");
  return m_agent - std::pow(s, price * (1.0 - pm) - price_sum);
}

double motivation(double sens_p, double price, double pm, double sus_ad, double ad, double sens_pm, double ft,
                  double inf) {
  return sens_p * price * (1.0 - pm) + sus_ad * ad + sens_pm * pm + ft * inf;
}

Agents make_agents(const MarketParams& p, std::uint64_t seed) {
  Rng rng(seed);
  Agents a;
  a.socio.resize(p.agents);
  for (double& m : a.socio) m = uniform(rng, p.socio_low, p.socio_high);
  a.init_ad.assign(p.agents, p.init_ad);
  a.init_pm.assign(p.agents, p.init_pm);
  a.init_ft.assign(p.agents, p.init_ft);
  a.brand.assign(p.agents, -1);
  return a;
}

StepResult step_market(const SocialNetwork& net, Agents& agents, const std::array<BrandInputs, 2>& brands,
                       MarketingState& state, const MarketParams& p, Rng& rng, bool mirror) {
  const std::size_t n = net.size();
  if (n == 0) throw ParameterError("empty network");
  if (agents.socio.size() != n || agents.brand.size() != n) throw ParameterError("agent count differs from network size");

  for (std::size_t b = 0; b < 2; ++b) {
    const BrandInputs& in = brands[b];
    if (!(in.price > 0.0) || !std::isfinite(in.price)) throw StateError("brand price must be finite and > 0");
    state.spend[b] = marketing_spend(in.budget, in.ad, in.pm, p.budget_factor, p.spend_adjust_time);
    state.force[b] = marketing_force(in.ad, in.pm, state.inter[b], p.weights);
  }

  // neighbor adoption fractions from the previous day
  std::array<std::vector<double>, 2> inf{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t k = 0; k < n; ++k) {
    const auto nb = net.neighbors(k);
    if (nb.empty()) continue;
    std::size_t c0 = 0, c1 = 0;
    for (std::uint32_t w : nb) {
      if (agents.brand[w] == 0) ++c0;
      else if (agents.brand[w] == 1) ++c1;
    }
    inf[0][k] = static_cast<double>(c0) / static_cast<double>(nb.size());
    inf[1][k] = static_cast<double>(c1) / static_cast<double>(nb.size());
  }

  double price_sum = brands[0].price + brands[1].price;
  if (p.average_price_sum) price_sum /= 2.0;

  const kernels::AgentColumns cols{agents.socio, agents.init_ad, agents.init_pm, agents.init_ft};
  std::array<std::vector<double>, 2> score{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t b = 0; b < 2; ++b) {
    const double eff = brands[b].price * (1.0 - brands[b].pm);
    const kernels::BrandTerms terms{eff, std::pow(p.price_base, eff - price_sum), brands[b].ad, brands[b].pm,
                                    state.force[b]};
    kernels::motivation(cols, inf[b], terms, score[b]);
  }

  StepResult r;
  for (std::size_t k = 0; k < n; ++k) {
    const double u = uniform01(rng);
    std::int8_t choice;
    if (score[0][k] > score[1][k]) {
      choice = 0;
    } else if (score[1][k] > score[0][k]) {
      choice = 1;
    } else {
      choice = (u < 0.5) != mirror ? 0 : 1;
    }
    if (!(std::isfinite(score[0][k]) && std::isfinite(score[1][k]))) throw StateError("non-finite motivation");
    agents.brand[k] = choice;
    ++r.adopters[static_cast<std::size_t>(choice)];
  }
  r.shares[0] = static_cast<double>(r.adopters[0]) / static_cast<double>(n);
  r.shares[1] = static_cast<double>(r.adopters[1]) / static_cast<double>(n);

  const std::array<double, 2> prices{brands[0].price, brands[1].price};
  const std::array<double, 2> pms{brands[0].pm, brands[1].pm};
  // F follows the co-state within the day; each Euler step is also kept below 0.5/L, L bounding
  // the local Jacobian, so the stiff regime at high prices stays stable
  const double base = marketing_force(brands[0].ad, brands[0].pm, 0.0, p.weights) +
                      marketing_force(brands[1].ad, brands[1].pm, 0.0, p.weights);
  const std::array<double, 2> d{p.delta[0], p.delta[1]};
  double left = 1.0;
  while (left > 0.0) {
    const double f = base + (state.inter[0] + state.inter[1]);
    const double g = std::fabs(p.rho + f);
    double lip = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      const std::size_t j = 1 - i;
      lip = std::max(lip, g * (d[i] + d[i] * d[j]) +
                              2.0 * std::fabs(d[i] * state.inter[i] + d[i] * d[j] * state.inter[j]));
    }
    double h = std::min(left, p.costate_dt);
    if (lip * h > 0.5) h = 0.5 / lip;
    if (left - h < 1e-12) h = left;
    state.inter = update_costate(state.inter, p.rho, p.delta[0], p.delta[1], f, prices, pms, h);
    if (!std::isfinite(state.inter[0]) || !std::isfinite(state.inter[1]))
      throw StateError("marketing co-state is not finite");
    left -= h;
  }
  state.total_force = base + (state.inter[0] + state.inter[1]);
  return r;
}

Market::Market(const MarketParams& p, std::uint64_t network_seed, std::uint64_t agent_seed, std::uint64_t tie_seed,
               bool mirror)
    : params_(p),
      net_(generate_ba_network(p.agents, p.seed_nodes, p.edges_per_node, network_seed)),
      agents_(make_agents(p, agent_seed)),
      rng_(tie_seed),
      mirror_(mirror) {
  validate(p);
}

StepResult Market::step(const std::array<BrandInputs, 2>& brands) {
  return step_market(net_, agents_, brands, state_, params_, rng_, mirror_);
}

}  // namespace duopoly::abs
