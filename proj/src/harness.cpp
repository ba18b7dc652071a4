#include "duopoly/harness.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "duopoly/error.hpp"
#include "duopoly/io.hpp"
#include "duopoly/parallel.hpp"
#include "duopoly/rng.hpp"

namespace duopoly::harness {

namespace fs = std::filesystem;
using nlohmann::json;

config::ExperimentConfig resolve(const Options& o) {
  config::ExperimentConfig c = o.config ? config::load_config(*o.config) : config::default_config();
  if (o.seed) c.gsa.seed = *o.seed;
  if (o.out) c.out = *o.out;
  if (o.jobs) {
    if (*o.jobs == 0) throw ConfigError("--jobs", "must be >= 1");
    c.gsa.jobs = *o.jobs;
  }
  if (o.epsilon) {
    if (!(*o.epsilon >= 0.0)) throw ConfigError("--epsilon", "must be >= 0");
    c.gsa.epsilon = *o.epsilon;
  }
  if (o.steps) {
    if (*o.steps == 0) throw ConfigError("--steps", "must be >= 1");
    c.gsa.stability.steps = *o.steps;
  }
  if (o.replications) {
    if (*o.replications == 0) throw ConfigError("--replications", "must be >= 1");
    c.replications = *o.replications;
  }
  return c;
}

namespace {

fs::path prepare_out(const config::ExperimentConfig& c) {
  const fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("out", "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

// Config echo without the keys that do not influence results.
json result_relevant(json j) {
  j.erase("jobs");
  j.erase("out");
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw Error("cannot write " + tmp.string());
    f << text;
  }
  fs::rename(tmp, path);
}

game::EmpiricalGame read_matrix(const Options& o, std::vector<std::string>* labels) {
  if (o.input.empty()) throw ConfigError("input", "a payoff matrix CSV is required");
  std::ifstream in(o.input);
  if (!in) throw ConfigError("input", "cannot open " + o.input);
  return io::read_payoff_matrix_csv(in, labels);
}

json profile_json(game::Profile p) { return json::array({p.first, p.second}); }

json summary_json(const std::vector<gsa::GsaIterationReport>& reports,
                  const std::vector<gsa::CrossIterationTest>& cross, const std::string& sunk_cost) {
  json sols = json::array();
  bool truncated = false;
  for (const auto& r : reports) {
    truncated = truncated || r.truncated;
    json s = {{"iteration", r.iteration}, {"truncated", r.truncated}};
    if (r.solution) {
      s["solution"] = profile_json(*r.solution);
      s["labels"] = json::array({r.labels[r.solution->first], r.labels[r.solution->second]});
      s["mean"] = json::array({r.extended_estimate.mean[0], r.extended_estimate.mean[1]});
    }
    sols.push_back(s);
  }
  return {{"schema_version", io::kReportSchemaVersion},
          {"iterations", reports.size()},
          {"truncated", truncated},
          {"sunk_cost", sunk_cost},
          {"solutions", sols},
          {"cross_iteration_tests", io::cross_tests_to_json(cross)}};
}

std::string sunk_name(hybrid::SunkCostMode m) { return m == hybrid::SunkCostMode::total ? "total" : "own_term"; }

}  // namespace

void cmd_simulate(const Options& o, std::ostream& log) {
  const auto c = resolve(o);
  const fs::path dir = prepare_out(c);
  const std::uint64_t stream = derive_seed(c.gsa.seed, {0});
  std::vector<hybrid::ReplicationOutput> reps(c.replications);
  parallel_for(c.replications, c.gsa.jobs, [&](std::size_t k) {
    reps[k] = hybrid::run_replication(c.profile, c.sim, hybrid::replication_seed(stream, k));
    reps[k].warmup_days = hybrid::detect_warmup(reps[k]);
  });
  json rows = json::array();
  std::array<double, 2> mean{0.0, 0.0};
  for (std::size_t k = 0; k < reps.size(); ++k) {
    json breakdown = json::array();
    for (std::size_t i = 0; i < 2; ++i) {
      const auto b = hybrid::cost_breakdown(reps[k], c.sim.costs, i, c.sim.sunk_cost);
      breakdown.push_back({{"revenue", b.revenue},
                           {"production", b.production},
                           {"raw_material", b.raw_material},
                           {"inventory", b.inventory},
                           {"backlog", b.backlog},
                           {"transport", b.transport},
                           {"marketing", b.marketing},
                           {"sunk", b.sunk},
                           {"payoff", b.payoff()}});
      mean[i] += b.payoff() / static_cast<double>(reps.size());
    }
    rows.push_back({{"id", k},
                    {"seed", reps[k].seed},
                    {"warmup_days", reps[k].warmup_days},
                    {"payoff", json::array({breakdown[0]["payoff"], breakdown[1]["payoff"]})},
                    {"breakdown", breakdown}});
    if (o.trace) {
      std::ostringstream ss;
      io::write_trace_csv(ss, reps[k]);
      write_text(dir / ("trace_" + std::to_string(k) + ".csv"), ss.str());
    }
  }
  io::write_json(dir / "payoffs.json", {{"schema_version", io::kReportSchemaVersion},
                                        {"seed", c.gsa.seed},
                                        {"sunk_cost", sunk_name(c.sim.sunk_cost)},
                                        {"replications", rows},
                                        {"mean", json::array({mean[0], mean[1]})}});
  log << "simulated " << reps.size() << " replication(s); mean payoff " << mean[0] << " / " << mean[1] << "\n";
}

void cmd_estimate(const Options& o, std::ostream& log) {
  const auto c = resolve(o);
  const fs::path dir = prepare_out(c);
  const auto& factors = c.gsa.schedule.empty() ? c.gsa.initial : c.gsa.schedule.front();
  const auto strategies = strategy::design(factors, c.gsa.max_strategies);
  const auto fixed = strategy::baseline(c.gsa.table);
  std::vector<strategy::CompanyStrategy> companies;
  std::vector<std::string> labels;
  for (const auto& s : strategies) {
    companies.push_back(strategy::resolve(factors, s, c.gsa.table, fixed));
    labels.push_back(strategy::describe(factors, s));
  }
  game::EmpiricalGame g(strategies.size(), true);
  const auto stored = g.stored_profiles();
  std::vector<game::PayoffSamples> samples(stored.size());
  parallel_for(stored.size(), c.gsa.jobs, [&](std::size_t i) {
    const auto p = stored[i];
    samples[i] = hybrid::estimate_payoffs({companies[p.first], companies[p.second]}, c.gsa.sampling.initial, c.sim,
                                          gsa::profile_stream(c.gsa.seed, 1, p));
  });
  for (std::size_t i = 0; i < stored.size(); ++i) g.set(stored[i], std::move(samples[i]));
  g.set_trim(c.gsa.sampling.trim);
  std::ostringstream ss;
  io::write_payoff_matrix_csv(ss, g, labels);
  write_text(dir / "payoff_matrix.csv", ss.str());
  const json echo = config::to_json(c);
  const json& listed = echo["gsa"]["schedule"].empty() ? echo["gsa"]["initial"] : echo["gsa"]["schedule"][0];
  io::write_json(dir / "strategies.json", {{"factors", listed}, {"strategies", strategies}, {"labels", labels}});
  log << "estimated " << stored.size() << " profiles x " << c.gsa.sampling.initial << " replications\n";
}

void cmd_solve(const Options& o, std::ostream& log) {
  const auto c = resolve(o);
  const fs::path dir = prepare_out(c);
  std::vector<std::string> labels;
  const auto g = read_matrix(o, &labels);
  g.require_complete();
  std::string how;
  const auto sol = gsa::select_solution(g, c.gsa.epsilon, &how);
  json eq = json::array(), eps = json::array();
  for (auto p : game::pure_nash(g, 0.0)) eq.push_back(profile_json(p));
  for (auto p : game::pure_nash(g, c.gsa.epsilon)) eps.push_back(profile_json(p));
  io::write_json(dir / "solve.json", {{"epsilon", c.gsa.epsilon},
                                      {"equilibria", eq},
                                      {"epsilon_equilibria", eps},
                                      {"solution", profile_json(sol)},
                                      {"selection", how},
                                      {"regret", g.strategies() > 1 ? game::regret(g, sol) : 0.0},
                                      {"labels", labels}});
  log << eq.size() << " pure equilibria, " << eps.size() << " within epsilon " << c.gsa.epsilon << "; solution ("
      << sol.first << "," << sol.second << ")\n";
}

void cmd_stability(const Options& o, std::ostream& log) {
  const auto c = resolve(o);
  const fs::path dir = prepare_out(c);
  const auto g = read_matrix(o, nullptr);
  g.require_complete();
  const auto sol = gsa::select_solution(g, c.gsa.epsilon);
  double tol = 0.0;
  for (std::size_t p = 0; p < 2; ++p) {
    const auto& s = g.summary(p, sol);
    if (s.n >= 2) tol = std::max(tol, stats::confidence_interval(s, c.gsa.sampling.alpha).half_width);
  }
  gsa::StabilityOptions so = c.gsa.stability;
  so.jobs = c.gsa.jobs;
  const auto r = gsa::stability_analysis(g, sol, c.gsa.epsilon, tol, so, derive_seed(c.gsa.seed, {0}));
  json classes = json::array();
  for (std::size_t i = 0; i < r.initial.size(); ++i)
    classes.push_back({{"initial", profile_json(r.initial[i])},
                       {"final", profile_json(r.final_profiles[i])},
                       {"class", std::string(gsa::name(r.classes[i]))}});
  io::write_json(dir / "stability.json", {{"epsilon", c.gsa.epsilon},
                                          {"steps", so.steps},
                                          {"rule", std::string(gsa::name(so.rule))},
                                          {"tolerance", tol},
                                          {"solution", profile_json(sol)},
                                          {"AS", r.ratios.asymptotic},
                                          {"MS", r.ratios.marginal},
                                          {"Instable", r.ratios.instable},
                                          {"profiles", classes}});
  log << "AS " << r.ratios.asymptotic << "  MS " << r.ratios.marginal << "  Instable " << r.ratios.instable << "\n";
}

void cmd_gsa(const Options& o, std::ostream& log) {
  const auto c = resolve(o);
  const fs::path dir = prepare_out(c);
  const fs::path ckdir = dir / "checkpoints";
  fs::create_directories(ckdir);
  const json echo = config::to_json(c);
  io::write_json(dir / "config.json", echo);

  gsa::RunHooks hooks;
  if (fs::exists(ckdir / "config.json")) {
    if (result_relevant(io::read_json(ckdir / "config.json")) != result_relevant(echo))
      throw ConfigError("out", dir.string() + " holds checkpoints of a different configuration");
    for (std::size_t k = 1; fs::exists(ckdir / ("checkpoint_" + std::to_string(k) + ".json")); ++k)
      hooks.resume.push_back(io::checkpoint_from_json(io::read_json(ckdir / ("checkpoint_" + std::to_string(k) + ".json"))));
    if (!hooks.resume.empty()) log << "resuming after iteration " << hooks.resume.size() << "\n";
  } else {
    io::write_json(ckdir / "config.json", echo);
  }
  hooks.on_iteration = [&](const gsa::Checkpoint& cp) {
    write_text(ckdir / ("checkpoint_" + std::to_string(cp.report.iteration) + ".json"),
               io::checkpoint_to_json(cp).dump() + "\n");
    log << "iteration " << cp.report.iteration << ": " << cp.report.profiles << " profiles, "
        << cp.report.replications << " replications, solution ";
    if (cp.report.solution)
      log << "(" << cp.report.solution->first << "," << cp.report.solution->second << ") payoff "
          << cp.report.extended_estimate.mean[0];
    log << (cp.report.truncated ? " [truncated]" : "") << "\n";
  };

  const auto result = gsa::run_gsa(c.gsa, gsa::simulation_oracle(c.sim, 1), hooks);

  json timing = json::array();
  std::ostringstream fig10;
  fig10 << "iteration,day,company,price,inv,backlog,shipR,MS,labor,wip\n";
  for (std::size_t k = 0; k < result.iterations.size(); ++k) {
    const auto& r = result.iterations[k];
    const std::string n = std::to_string(r.iteration);
    io::write_json(dir / ("iteration_" + n + ".json"), io::report_to_json(r));
    std::ostringstream m;
    io::write_payoff_matrix_csv(m, result.games[k], r.labels);
    if (result.games[k].complete()) write_text(dir / ("payoff_matrix_" + n + ".csv"), m.str());
    timing.push_back({{"iteration", r.iteration},
                      {"seconds", r.runtime_seconds},
                      {"resumed", k < hooks.resume.size()}});
    if (r.solution) {
      const std::array<strategy::CompanyStrategy, 2> pair{
          strategy::resolve(r.factors, r.strategies[r.solution->first], c.gsa.table, r.fixed),
          strategy::resolve(r.factors, r.strategies[r.solution->second], c.gsa.table, r.fixed)};
      const auto rep = hybrid::run_replication(pair, c.sim, derive_seed(c.gsa.seed, {r.iteration, 10}));
      std::ostringstream t;
      io::write_trace_csv(t, rep);
      std::istringstream lines(t.str());
      std::string line;
      std::getline(lines, line);
      while (std::getline(lines, line)) fig10 << r.iteration << ',' << line << '\n';
    }
  }
  write_text(dir / "fig10_series.csv", fig10.str());
  io::write_plot_data(dir, result.iterations, result.cross_tests);
  io::write_json(dir / "summary.json", summary_json(result.iterations, result.cross_tests, sunk_name(c.sim.sunk_cost)));
  io::write_json(dir / "timing.json", timing);
  log << result.iterations.size() << " iteration report(s) in " << dir.string()
      << (result.truncated ? " (truncated)" : "") << "\n";
}

void cmd_report(const Options& o, std::ostream& log) {
  const auto c = resolve(o);
  const fs::path dir(c.out);
  std::vector<gsa::GsaIterationReport> reports;
  for (std::size_t k = 1; fs::exists(dir / ("iteration_" + std::to_string(k) + ".json")); ++k)
    reports.push_back(io::report_from_json(io::read_json(dir / ("iteration_" + std::to_string(k) + ".json"))));
  if (reports.empty()) throw ConfigError("out", "no iteration reports in " + dir.string());
  std::string sunk = sunk_name(c.sim.sunk_cost);
  if (fs::exists(dir / "config.json")) sunk = io::read_json(dir / "config.json")["simulation"]["sunk_cost"];
  const auto cross = gsa::cross_iteration_tests(reports);
  io::write_plot_data(dir, reports, cross);
  io::write_json(dir / "summary.json", summary_json(reports, cross, sunk));
  log << "regenerated summary and plot data for " << reports.size() << " iteration(s)\n";
}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e) ||
      dynamic_cast<const DesignError*>(&e) || dynamic_cast<const IncompleteGameError*>(&e))
    return 2;
  return 3;
}

}  // namespace duopoly::harness
