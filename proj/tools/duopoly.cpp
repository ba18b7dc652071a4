// Command-line front end: duopoly <simulate|estimate|solve|gsa|stability|report> [flags]

#include <iostream>

#include <CLI11.hpp>

#include "duopoly/harness.hpp"

int main(int argc, char** argv) {
  using namespace duopoly;
  CLI::App app{"Hybrid supply-chain / consumer-market duopoly simulator and game solver"};
  app.require_subcommand(1);

  harness::Options o;
  std::string config, out, input;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  double epsilon = 0.0;
  std::size_t steps = 0, replications = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "experiment configuration (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--jobs", jobs, "worker threads");
  };

  auto* simulate = app.add_subcommand("simulate", "run replications of the configured profile");
  common(simulate);
  simulate->add_flag("--trace", o.trace, "write a daily trace CSV per replication");
  simulate->add_option("-n,--replications", replications, "number of replications");

  auto* estimate = app.add_subcommand("estimate", "estimate the first iteration's payoff matrix");
  common(estimate);

  auto* solve = app.add_subcommand("solve", "equilibria of a payoff matrix CSV");
  common(solve);
  solve->add_option("matrix", input, "payoff matrix CSV")->required()->check(CLI::ExistingFile);
  solve->add_option("--epsilon", epsilon, "equilibrium tolerance");

  auto* gsa = app.add_subcommand("gsa", "run the full game solving loop");
  common(gsa);
  gsa->add_option("--epsilon", epsilon, "equilibrium tolerance and stability band");
  gsa->add_option("--steps", steps, "best-response steps in the stability analysis");

  auto* stability = app.add_subcommand("stability", "stability ratios of a payoff matrix CSV");
  common(stability);
  stability->add_option("matrix", input, "payoff matrix CSV")->required()->check(CLI::ExistingFile);
  stability->add_option("--epsilon", epsilon, "marginal stability band");
  stability->add_option("--steps", steps, "best-response steps");

  auto* report = app.add_subcommand("report", "rebuild summary and plot data from iteration reports");
  common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto given = [](CLI::App* sub, const char* name) {
    const auto opts = sub->get_options([&](const CLI::Option* opt) { return opt->check_name(name); });
    return !opts.empty() && opts.front()->count() > 0;
  };
  CLI::App* sub = app.get_subcommands().front();
  if (given(sub, "--config")) o.config = config;
  if (given(sub, "--seed")) o.seed = seed;
  if (given(sub, "--out")) o.out = out;
  if (given(sub, "--jobs")) o.jobs = jobs;
  if (given(sub, "--epsilon")) o.epsilon = epsilon;
  if (given(sub, "--steps")) o.steps = steps;
  if (given(sub, "--replications")) o.replications = replications;
  o.input = input;

  try {
    if (sub == simulate) harness::cmd_simulate(o, std::cout);
    else if (sub == estimate) harness::cmd_estimate(o, std::cout);
    else if (sub == solve) harness::cmd_solve(o, std::cout);
    else if (sub == gsa) harness::cmd_gsa(o, std::cout);
    else if (sub == stability) harness::cmd_stability(o, std::cout);
    else harness::cmd_report(o, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return harness::exit_code_for(e);
  }
  return 0;
}
