#pragma once

// The game solving loop: build strategies from the active factors, estimate the symmetric
// empirical game, pick an equilibrium, screen factors, refine, and evaluate the solution.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "duopoly/doe.hpp"
#include "duopoly/game.hpp"
#include "duopoly/hybrid.hpp"
#include "duopoly/plan.hpp"
#include "duopoly/stability.hpp"
#include "duopoly/stats.hpp"
#include "duopoly/strategy.hpp"

namespace duopoly::gsa {

/// Replications first_id .. first_id+n-1 of a profile whose random stream is `stream`.
using PayoffOracle = std::function<game::PayoffSamples(const std::array<strategy::CompanyStrategy, 2>& companies,
                                                       std::size_t n, std::uint64_t stream, std::uint64_t first_id)>;

/// Oracle backed by the hybrid simulation.
PayoffOracle simulation_oracle(const hybrid::HybridConfig& config, unsigned jobs);

struct GsaConfig {
  strategy::FactorTable table = strategy::FactorTable::defaults();
  stats::SamplingPolicy sampling;
  /// Explicit per-iteration factor sets. When empty the loop is adaptive: it starts from
  /// `initial` and follows refine_plan until the plan is terminal.
  std::vector<std::vector<strategy::ActiveFactor>> schedule;
  std::vector<strategy::ActiveFactor> initial;
  std::size_t max_iterations = 5;
  std::size_t max_strategies = 16;
  double epsilon = 1500.0;  // ε-NE tolerance and marginal-stability band
  std::size_t neighbors = 10;
  bool top_up = true;  // ECVI sample extension of the solution and its neighbors
  StabilityOptions stability;
  std::vector<double> tolerance_grid;  // for the equilibrium-share curve; default 0..3000 step 250
  std::uint64_t seed = 42;
  unsigned jobs = 1;
  std::size_t replication_budget = 0;  // total replications over the run; 0 = unlimited

  static GsaConfig paper_schedule();
  void validate() const;
  std::vector<double> tolerances() const;
};

struct SolutionEstimate {
  std::size_t n = 0;                  // effective (trimmed) sample count
  std::array<double, 2> mean{};       // per player
  std::array<double, 2> half_width{};
};

struct NeighborTest {
  game::Profile profile;
  std::array<double, 2> mean{};  // per player
  std::array<double, 2> p_value{1.0, 1.0};
};

struct ToleranceRow {
  double tolerance = 0.0;
  double symmetric_share = 0.0;  // fraction of ordered profiles that are symmetric ε-NE
  double other_share = 0.0;      // fraction that are asymmetric ε-NE
};

struct GsaIterationReport {
  std::size_t iteration = 0;  // 1-based
  int phase = 1;
  std::vector<strategy::ActiveFactor> factors;
  std::vector<strategy::Strategy> strategies;
  std::vector<std::string> labels;
  strategy::CompanyStrategy fixed;  // values of the inactive factors
  std::size_t profiles = 0;
  std::size_t replications = 0;  // spent in this iteration
  std::vector<game::Profile> equilibria;          // ε = 0
  std::vector<game::Profile> epsilon_equilibria;  // ε = config epsilon
  std::optional<game::Profile> solution;
  std::string selection;  // how the solution was picked
  double solution_regret = 0.0;
  SolutionEstimate initial_estimate;
  SolutionEstimate extended_estimate;
  std::vector<NeighborTest> neighbor_tests;
  std::vector<ToleranceRow> tolerance_curve;
  doe::Analysis doe;
  plan::FactorPlan next_plan;
  StabilityRatios stability;
  double stability_tolerance = 0.0;
  std::array<std::vector<double>, 2> solution_samples;  // trimmed payoffs at the solution after top-up
  double runtime_seconds = 0.0;
  bool truncated = false;
  std::string truncation_reason;
};

struct CrossIterationTest {
  std::size_t from = 0;  // iteration numbers, 1-based
  std::size_t to = 0;
  std::array<double, 2> p_value{1.0, 1.0};  // per player, H1: mean payoff at `from` < mean payoff at `to`
};

struct GsaResult {
  std::vector<GsaIterationReport> iterations;
  std::vector<game::EmpiricalGame> games;  // per iteration, after top-ups
  std::vector<CrossIterationTest> cross_tests;
  bool truncated = false;
};

/// Persisted state of one finished iteration, enough to resume the loop after it.
struct Checkpoint {
  GsaIterationReport report;
  game::EmpiricalGame game;
  std::size_t replications_used = 0;  // cumulative
};

struct RunHooks {
  /// Checkpoints of iterations already completed (1..k, in order); the loop resumes after them.
  std::vector<Checkpoint> resume;
  /// Called after each completed iteration.
  std::function<void(const Checkpoint&)> on_iteration;
};

GsaResult run_gsa(const GsaConfig& config, const PayoffOracle& oracle, const RunHooks& hooks = {});

// Building blocks, exposed for testing.

/// Stream of profile (a, b), a <= b, in a given iteration.
std::uint64_t profile_stream(std::uint64_t seed, std::size_t iteration, game::Profile p);

/// ε-NE of g, preferring symmetric profiles, then the larger payoff sum, then the smallest index;
/// the minimum-regret profile when no ε-NE exists.
game::Profile select_solution(const game::EmpiricalGame& g, double epsilon, std::string* how = nullptr);

/// k ordered profiles other than `solution` whose player-1 mean is closest to the solution's.
std::vector<game::Profile> nearest_profiles(const game::EmpiricalGame& g, game::Profile solution, std::size_t k);

/// Two-sided Welch tests of the solution's payoffs against each neighbor's, per player.
std::vector<NeighborTest> neighbor_strictness_test(const game::EmpiricalGame& g, game::Profile solution,
                                                   std::size_t k);

/// Share of ordered profiles that are ε-NE, split into symmetric and asymmetric profiles.
ToleranceRow equilibrium_share(const game::EmpiricalGame& g, double tolerance);

/// Main-effect screening with each strategy's player-1 payoff averaged over all opponents.
doe::Analysis screen_factors(const game::EmpiricalGame& g, const std::vector<strategy::Strategy>& strategies,
                             double alpha);

/// One-sided Welch tests between consecutive iterations' solution payoffs and from each iteration
/// to the last.
std::vector<CrossIterationTest> cross_iteration_tests(const std::vector<GsaIterationReport>& reports);

}  // namespace duopoly::gsa
