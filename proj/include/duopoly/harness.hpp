#pragma once

// Command implementations behind the `duopoly` executable. Each writes its files under the
// output directory and a short summary to `log`.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "duopoly/config.hpp"

namespace duopoly::harness {

struct Options {
  std::optional<std::string> config;  // path; defaults apply when absent
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> jobs;
  bool trace = false;
  std::optional<double> epsilon;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> replications;
  std::string input;  // payoff matrix CSV for solve/stability
};

/// Loaded config with command-line overrides applied.
config::ExperimentConfig resolve(const Options& o);

/// Runs `replications` replications of the configured profile: payoffs.json, and with --trace one
/// trace_<id>.csv per replication.
void cmd_simulate(const Options& o, std::ostream& log);
/// Estimates the first iteration's empirical game: payoff_matrix.csv and strategies.json.
void cmd_estimate(const Options& o, std::ostream& log);
/// Equilibria of a persisted payoff matrix: solve.json.
void cmd_solve(const Options& o, std::ostream& log);
/// Stability ratios of a persisted payoff matrix around its selected solution: stability.json.
void cmd_stability(const Options& o, std::ostream& log);
/// Full GSA run with per-iteration checkpoints; rerunning on the same directory resumes.
void cmd_gsa(const Options& o, std::ostream& log);
/// Regenerates summary and plot data from the iteration reports in the output directory.
void cmd_report(const Options& o, std::ostream& log);

/// Maps an exception to the process exit code: 2 for validation errors, 3 otherwise.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace duopoly::harness
