#include "duopoly/gsa.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "duopoly/error.hpp"
#include "duopoly/parallel.hpp"
#include "duopoly/rng.hpp"

namespace duopoly::gsa {

using game::EmpiricalGame;
using game::Profile;
using strategy::ActiveFactor;
using strategy::Factor;

PayoffOracle simulation_oracle(const hybrid::HybridConfig& config, unsigned jobs) {
  return [config, jobs](const std::array<strategy::CompanyStrategy, 2>& companies, std::size_t n,
                        std::uint64_t stream, std::uint64_t first_id) {
    return hybrid::estimate_payoffs(companies, n, config, stream, first_id, jobs);
  };
}

GsaConfig GsaConfig::paper_schedule() {
  GsaConfig c;
  auto two = [](std::initializer_list<Factor> fs) {
    std::vector<ActiveFactor> out;
    for (Factor f : fs) out.push_back({f, 2});
    return out;
  };
  auto four = [](std::initializer_list<Factor> fs) {
    std::vector<ActiveFactor> out;
    for (Factor f : fs) out.push_back({f, 4});
    return out;
  };
  c.schedule = {
      two({Factor::manufacturing, Factor::logistics, Factor::pricing, Factor::marketing}),
      two({Factor::material_inv_cov, Factor::safety_stock_cov, Factor::material_lead_time, Factor::inv_fulfill_time,
           Factor::promotion_depth, Factor::advertising}),
      four({Factor::material_inv_cov, Factor::safety_stock_cov, Factor::material_lead_time,
            Factor::inv_fulfill_time}),
      four({Factor::material_inv_cov, Factor::safety_stock_cov, Factor::promotion_depth}),
      four({Factor::material_inv_cov, Factor::safety_stock_cov, Factor::advertising}),
  };
  c.max_iterations = c.schedule.size();
  return c;
}

void GsaConfig::validate() const {
  table.validate();
  stats::validate(sampling);
  stability.validate();
  if (max_iterations == 0) throw ParameterError("max_iterations must be >= 1");
  if (max_strategies < 2) throw ParameterError("max_strategies must be >= 2");
  if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be >= 0");
  if (schedule.empty() && initial.empty()) throw ParameterError("either a schedule or initial factors are required");
  auto check = [&](const std::vector<ActiveFactor>& fs) {
    if (fs.empty()) throw ParameterError("an iteration needs at least one factor");
    for (const auto& f : fs)
      if (f.levels != 2 && f.levels != 4) throw ParameterError("factor levels must be 2 or 4");
    strategy::design(fs, max_strategies);
  };
  for (const auto& fs : schedule) check(fs);
  if (schedule.empty()) check(initial);
  for (double t : tolerance_grid)
    if (!(t >= 0.0)) throw ParameterError("tolerances must be >= 0");
}

std::vector<double> GsaConfig::tolerances() const {
  if (!tolerance_grid.empty()) return tolerance_grid;
  std::vector<double> out;
  for (int i = 0; i <= 12; ++i) out.push_back(250.0 * i);
  return out;
}

std::uint64_t profile_stream(std::uint64_t seed, std::size_t iteration, Profile p) {
  return derive_seed(seed, {iteration, p.first, p.second});
}

Profile select_solution(const EmpiricalGame& g, double epsilon, std::string* how) {
  std::vector<Profile> cands = game::pure_nash(g, epsilon);
  if (cands.empty()) {
    Profile best{0, 0};
    double best_r = INFINITY;
    for (std::size_t a = 0; a < g.strategies(); ++a)
      for (std::size_t b = 0; b < g.strategies(); ++b) {
        const double r = game::regret(g, {a, b});
        if (r < best_r) {
          best_r = r;
          best = {a, b};
        }
      }
    if (how) *how = "minimum regret";
    return best;
  }
  auto key_sum = [&](Profile p) { return g.mean(0, p) + g.mean(1, p); };
  std::stable_sort(cands.begin(), cands.end(), [&](Profile x, Profile y) {
    const bool sx = x.first == x.second, sy = y.first == y.second;
    if (sx != sy) return sx;
    return key_sum(x) > key_sum(y);
  });
  if (how) *how = cands.front().first == cands.front().second ? "symmetric epsilon-NE" : "epsilon-NE";
  return cands.front();
}

std::vector<Profile> nearest_profiles(const EmpiricalGame& g, Profile solution, std::size_t k) {
  const double target = g.mean(0, solution);
  std::vector<std::pair<double, Profile>> all;
  for (std::size_t a = 0; a < g.strategies(); ++a)
    for (std::size_t b = 0; b < g.strategies(); ++b) {
      const Profile p{a, b};
      if (p == solution) continue;
      all.push_back({std::fabs(g.mean(0, p) - target), p});
    }
  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Profile> out;
  for (std::size_t i = 0; i < std::min(k, all.size()); ++i) out.push_back(all[i].second);
  return out;
}

std::vector<NeighborTest> neighbor_strictness_test(const EmpiricalGame& g, Profile solution, std::size_t k) {
  std::vector<NeighborTest> out;
  if (k == 0) return out;
  const std::array<std::vector<double>, 2> base{g.values(0, solution), g.values(1, solution)};
  for (Profile p : nearest_profiles(g, solution, k)) {
    NeighborTest t;
    t.profile = p;
    for (std::size_t pl = 0; pl < 2; ++pl) {
      t.mean[pl] = g.mean(pl, p);
      t.p_value[pl] = stats::welch_t_test(base[pl], g.values(pl, p), stats::Alternative::two_sided).p;
    }
    out.push_back(t);
  }
  return out;
}

ToleranceRow equilibrium_share(const EmpiricalGame& g, double tolerance) {
  ToleranceRow row;
  row.tolerance = tolerance;
  const double total = static_cast<double>(g.strategies() * g.strategies());
  std::size_t sym = 0, other = 0;
  for (Profile p : game::pure_nash(g, tolerance)) (p.first == p.second ? sym : other)++;
  row.symmetric_share = static_cast<double>(sym) / total;
  row.other_share = static_cast<double>(other) / total;
  return row;
}

doe::Analysis screen_factors(const EmpiricalGame& g, const std::vector<strategy::Strategy>& strategies,
                             double alpha) {
  const std::size_t s = g.strategies();
  if (strategies.size() != s) throw ParameterError("one strategy per game row is required");
  std::vector<doe::Response> responses(s);
  const double w = 1.0 / static_cast<double>(s);
  for (std::size_t a = 0; a < s; ++a) {
    double mean = 0.0, var = 0.0, den = 0.0;
    for (std::size_t b = 0; b < s; ++b) {
      const stats::Summary& sm = g.summary(0, {a, b});
      mean += w * sm.mean;
      if (sm.n >= 2) {
        const double term = w * w * sm.variance / static_cast<double>(sm.n);
        var += term;
        den += term * term / static_cast<double>(sm.n - 1);
      }
    }
    responses[a] = {mean, var, den > 0.0 ? var * var / den : 0.0};
  }
  return doe::doe_significance(strategies, responses, alpha);
}

std::vector<CrossIterationTest> cross_iteration_tests(const std::vector<GsaIterationReport>& reports) {
  std::vector<CrossIterationTest> out;
  auto usable = [](const GsaIterationReport& r) {
    return r.solution && r.solution_samples[0].size() >= 2 && r.solution_samples[1].size() >= 2;
  };
  auto test = [&](std::size_t i, std::size_t j) {
    if (!usable(reports[i]) || !usable(reports[j])) return;
    CrossIterationTest t{reports[i].iteration, reports[j].iteration, {}};
    for (std::size_t pl = 0; pl < 2; ++pl)
      t.p_value[pl] =
          stats::welch_t_test(reports[i].solution_samples[pl], reports[j].solution_samples[pl], stats::Alternative::less)
              .p;
    out.push_back(t);
  };
  const std::size_t k = reports.size();
  for (std::size_t i = 0; i + 1 < k; ++i) test(i, i + 1);
  for (std::size_t i = 0; i + 2 < k; ++i) test(i, k - 1);
  return out;
}

namespace {

SolutionEstimate estimate(const EmpiricalGame& g, Profile p, double alpha) {
  SolutionEstimate e;
  for (std::size_t pl = 0; pl < 2; ++pl) {
    const stats::Summary& s = g.summary(pl, p);
    e.n = s.n;
    e.mean[pl] = s.mean;
    e.half_width[pl] = s.n >= 2 ? stats::confidence_interval(s, alpha).half_width : 0.0;
  }
  return e;
}

Profile canonical(Profile p) { return p.first <= p.second ? p : Profile{p.second, p.first}; }

int phase_of(const std::vector<ActiveFactor>& fs) {
  return std::any_of(fs.begin(), fs.end(), [](const ActiveFactor& f) { return f.levels == 4; }) ? 2 : 1;
}

}  // namespace

GsaResult run_gsa(const GsaConfig& config, const PayoffOracle& oracle, const RunHooks& hooks) {
  config.validate();
  if (!oracle) throw ParameterError("payoff oracle is empty");
  const auto& policy = config.sampling;
  const bool adaptive = config.schedule.empty();
  const std::size_t iterations =
      adaptive ? config.max_iterations : std::min(config.max_iterations, config.schedule.size());

  GsaResult res;
  plan::FactorPlan plan{config.initial, phase_of(config.initial), false};
  strategy::CompanyStrategy fixed = strategy::baseline(config.table);
  std::size_t used = 0;
  bool stop = false;

  auto advance = [&](const GsaIterationReport& r) {
    if (r.solution) fixed = strategy::resolve(r.factors, r.strategies[r.solution->first], config.table, r.fixed);
    plan = r.next_plan;
    if (r.truncated || (adaptive && plan.terminal)) stop = true;
  };

  for (const Checkpoint& cp : hooks.resume) {
    if (cp.report.iteration != res.iterations.size() + 1) throw ParameterError("checkpoints are not consecutive");
    res.iterations.push_back(cp.report);
    res.games.push_back(cp.game);
    used = cp.replications_used;
    advance(cp.report);
  }

  for (std::size_t it = res.iterations.size(); it < iterations && !stop; ++it) {
    const auto t0 = std::chrono::steady_clock::now();
    GsaIterationReport rep;
    rep.iteration = it + 1;
    rep.factors = adaptive ? plan.active : config.schedule[it];
    rep.phase = adaptive ? plan.phase : phase_of(rep.factors);
    rep.strategies = strategy::design(rep.factors, config.max_strategies);
    for (const auto& s : rep.strategies) rep.labels.push_back(strategy::describe(rep.factors, s));
    rep.fixed = fixed;

    const std::size_t S = rep.strategies.size();
    std::vector<strategy::CompanyStrategy> companies;
    for (const auto& s : rep.strategies) companies.push_back(strategy::resolve(rep.factors, s, config.table, fixed));

    EmpiricalGame g(S, true);
    const std::vector<Profile> stored = g.stored_profiles();
    rep.profiles = stored.size();

    const std::size_t need = stored.size() * policy.initial;
    if (config.replication_budget && used + need > config.replication_budget) {
      rep.truncated = true;
      rep.truncation_reason = "replication budget exhausted before initial sampling";
      rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      res.iterations.push_back(std::move(rep));
      res.games.push_back(std::move(g));
      res.truncated = true;
      break;
    }

    auto simulate = [&](const std::vector<Profile>& profiles, const std::vector<std::size_t>& counts,
                        const std::vector<std::size_t>& first) {
      std::vector<game::PayoffSamples> out(profiles.size());
      parallel_for(profiles.size(), config.jobs, [&](std::size_t i) {
        if (counts[i] == 0) return;
        const Profile p = profiles[i];
        out[i] = oracle({companies[p.first], companies[p.second]}, counts[i], profile_stream(config.seed, it + 1, p),
                        first[i]);
        if (out[i].size() != counts[i]) throw Error("payoff oracle returned a wrong sample count");
      });
      return out;
    };

    {
      auto batch = simulate(stored, std::vector<std::size_t>(stored.size(), policy.initial),
                            std::vector<std::size_t>(stored.size(), 0));
      for (std::size_t i = 0; i < stored.size(); ++i) g.set(stored[i], std::move(batch[i]));
    }
    g.set_trim(policy.trim);
    used += need;
    rep.replications = need;

    rep.equilibria = game::pure_nash(g, 0.0);
    rep.epsilon_equilibria = game::pure_nash(g, config.epsilon);
    const Profile sol = select_solution(g, config.epsilon, &rep.selection);
    rep.solution = sol;
    rep.initial_estimate = estimate(g, sol, policy.alpha);

    if (config.top_up) {
      std::vector<Profile> targets{canonical(sol)};
      for (Profile p : nearest_profiles(g, sol, config.neighbors)) {
        const Profile c = canonical(p);
        if (std::find(targets.begin(), targets.end(), c) == targets.end()) targets.push_back(c);
      }
      std::vector<std::size_t> counts, first;
      for (Profile p : targets) {
        std::size_t want = 0;
        for (std::size_t pl = 0; pl < 2; ++pl) {
          const stats::Summary& s = g.summary(pl, p);
          want = std::max(want, stats::decide_sample_size(s, policy) - s.n);
        }
        if (config.replication_budget) {
          const std::size_t left = config.replication_budget - used;
          if (want > left) {
            want = left;
            rep.truncated = true;
            rep.truncation_reason = "replication budget exhausted during sample extension";
          }
        }
        used += want;
        counts.push_back(want);
        first.push_back(g.samples(p).size());
      }
      auto batch = simulate(targets, counts, first);
      for (std::size_t i = 0; i < targets.size(); ++i) {
        if (counts[i] == 0) continue;
        g.add_samples(targets[i], batch[i]);
        rep.replications += counts[i];
      }
    }

    rep.extended_estimate = estimate(g, sol, policy.alpha);
    rep.solution_regret = S > 1 ? game::regret(g, sol) : 0.0;
    rep.neighbor_tests = neighbor_strictness_test(g, sol, config.neighbors);
    for (double t : config.tolerances()) rep.tolerance_curve.push_back(equilibrium_share(g, t));
    rep.doe = screen_factors(g, rep.strategies, policy.alpha);
    rep.next_plan = plan::refine_plan({rep.factors, rep.phase, false}, rep.doe.main, config.max_strategies);

    rep.stability_tolerance = std::max(rep.extended_estimate.half_width[0], rep.extended_estimate.half_width[1]);
    StabilityOptions so = config.stability;
    so.jobs = config.jobs;
    rep.stability =
        stability_analysis(g, sol, config.epsilon, rep.stability_tolerance, so, derive_seed(config.seed, {it + 1, 0}))
            .ratios;
    rep.solution_samples = {g.values(0, sol), g.values(1, sol)};
    rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    res.iterations.push_back(rep);
    res.games.push_back(g);
    if (rep.truncated) res.truncated = true;
    if (hooks.on_iteration) hooks.on_iteration(Checkpoint{rep, g, used});
    advance(rep);
  }

  for (const auto& r : res.iterations)
    if (r.truncated) res.truncated = true;
  res.cross_tests = cross_iteration_tests(res.iterations);
  return res;
}

}  // namespace duopoly::gsa
