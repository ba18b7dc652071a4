#pragma once

// Two-player normal-form game with sampled payoffs and pure-strategy
// equilibrium queries.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "duopoly/stats.hpp"

namespace duopoly::game {

/// (player-1 strategy, player-2 strategy).
using Profile = std::pair<std::size_t, std::size_t>;

/// (S^2 - S)/2 + S.
std::uint64_t symmetric_profile_count(std::uint64_t strategies);

/// Replicated payoffs of one profile, tagged by replication id. Merging sorts by id, so the
/// result does not depend on the order in which partial sets arrive.
struct PayoffSamples {
  std::vector<std::uint64_t> ids;
  std::array<std::vector<double>, 2> values;

  std::size_t size() const noexcept { return ids.size(); }
  void add(std::uint64_t id, double player1, double player2);
  void merge(const PayoffSamples& other);
  /// Values with players exchanged.
  PayoffSamples swapped() const;
};

class EmpiricalGame {
 public:
  EmpiricalGame() = default;
  EmpiricalGame(std::size_t strategies, bool symmetric);

  /// Deterministic game from mean payoffs: payoff(p, a, b) for player p in {0, 1}.
  template <class F>
  static EmpiricalGame from_payoffs(std::size_t strategies, bool symmetric, F payoff) {
    EmpiricalGame g(strategies, symmetric);
    for (std::size_t a = 0; a < strategies; ++a)
      for (std::size_t b = symmetric ? a : 0; b < strategies; ++b) {
        PayoffSamples s;
        s.add(0, payoff(0, a, b), payoff(1, a, b));
        g.set({a, b}, std::move(s));
      }
    return g;
  }

  std::size_t strategies() const noexcept { return strategies_; }
  bool symmetric() const noexcept { return symmetric_; }

  /// Profiles that are stored: a <= b when symmetric, all pairs otherwise.
  std::vector<Profile> stored_profiles() const;
  std::vector<Profile> missing() const;
  bool complete() const;
  bool has(Profile p) const;

  /// Samples as seen from (a, b); for a symmetric game (b, a) with a < b is served from storage
  /// of (a, b) with the players exchanged.
  void set(Profile p, PayoffSamples samples);
  void add_samples(Profile p, const PayoffSamples& samples);
  /// Stores only the statistics of a profile, as seen from p (e.g. read back from a payoff
  /// matrix file). Such cells answer summary/mean queries; values() and add_samples() throw, and
  /// trimming does not apply to them.
  void set_summaries(Profile p, const std::array<stats::Summary, 2>& s);
  bool summary_only(Profile p) const;
  PayoffSamples samples(Profile p) const;

  /// Per-tail trimming applied before any statistic is computed.
  void set_trim(std::size_t k);
  std::size_t trim() const noexcept { return trim_; }

  /// Statistics of the (trimmed) payoff of `player` at profile p.
  const stats::Summary& summary(std::size_t player, Profile p) const;
  double mean(std::size_t player, Profile p) const { return summary(player, p).mean; }
  /// (Trimmed) values of `player` at p.
  std::vector<double> values(std::size_t player, Profile p) const;

  /// Throws IncompleteGameError listing missing profiles when the game is incomplete.
  void require_complete() const;

 private:
  std::size_t slot(Profile p, bool& swapped) const;
  void refresh(std::size_t slot);

  std::size_t strategies_ = 0;
  bool symmetric_ = true;
  std::size_t trim_ = 0;
  std::vector<std::optional<PayoffSamples>> cells_;
  std::vector<std::array<stats::Summary, 2>> summaries_;
  std::vector<bool> summary_only_;
};

/// Unilateral deviations of `player` from p, including p itself.
std::vector<Profile> deviation_set(const EmpiricalGame& g, Profile p, std::size_t player);

/// max over deviations s' != s_player of u(s') - u(p) for one player.
double player_regret(const EmpiricalGame& g, Profile p, std::size_t player);

/// max over both players of player_regret. Negative at a strict equilibrium.
/// Throws ParameterError for a one-strategy game and IncompleteGameError when a deviation is missing.
double regret(const EmpiricalGame& g, Profile p);

/// Every maximizer of `player`'s mean payoff against the opponent's strategy.
std::vector<std::size_t> best_responses(const EmpiricalGame& g, std::size_t player, std::size_t opponent);

/// All profiles at which no player gains more than epsilon by deviating alone, verified against
/// every unilateral deviation. Ordered profiles, lexicographic.
std::vector<Profile> pure_nash(const EmpiricalGame& g, double epsilon);

/// Alternating best-response improvement from `start`, taking the first maximizer; stops at a
/// profile where neither player improves by more than epsilon or after `max_rounds`.
Profile best_response_search(const EmpiricalGame& g, Profile start, double epsilon, std::size_t max_rounds = 1000);

}  // namespace duopoly::game
