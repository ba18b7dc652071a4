#pragma once

// Best-response dynamics from every initial profile, classified by where the
// payoff trajectory ends up relative to a solution profile.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "duopoly/game.hpp"

namespace duopoly::gsa {

enum class StabilityClass { asymptotically_stable, marginally_stable, instable };
enum class UpdateRule { alternating, simultaneous };

std::string_view name(StabilityClass c) noexcept;
std::string_view name(UpdateRule r) noexcept;

struct StabilityOptions {
  std::size_t steps = 2000;
  double window_fraction = 0.1;  // classification uses the last steps*window_fraction profiles
  UpdateRule rule = UpdateRule::alternating;
  bool noisy = true;  // each step compares payoffs drawn from N(mean, s^2/n) instead of the means
  unsigned jobs = 1;
  void validate() const;
};

struct StabilityRatios {
  double asymptotic = 0.0;
  double marginal = 0.0;
  double instable = 0.0;
};

struct StabilityResult {
  std::vector<game::Profile> initial;  // every ordered profile, lexicographic
  std::vector<StabilityClass> classes;
  std::vector<game::Profile> final_profiles;
  StabilityRatios ratios;
};

/// Runs best-response dynamics from every ordered profile of g for `steps` steps. Alternating:
/// player (t mod 2) moves at step t; simultaneous: both move. Ties between maximizers are broken
/// uniformly. A trajectory is asymptotically stable when, over the final window, both players'
/// mean payoffs stay within `tolerance` of their payoffs at `solution`, marginally stable when
/// they stay within epsilon, and instable otherwise. Each initial profile draws from its own
/// stream derived from `seed`. Throws IncompleteGameError for an incomplete game.
StabilityResult stability_analysis(const game::EmpiricalGame& g, game::Profile solution, double epsilon,
                                   double tolerance, const StabilityOptions& options, std::uint64_t seed);

}  // namespace duopoly::gsa
