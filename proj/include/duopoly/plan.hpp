#pragma once

#include <cstddef>
#include <vector>

#include "duopoly/doe.hpp"
#include "duopoly/strategy.hpp"

namespace duopoly::plan {

/// Active factors of one GSA iteration and the refinement phase: 1 refines which factors are
/// played, 2 refines their level grids.
struct FactorPlan {
  std::vector<strategy::ActiveFactor> active;
  int phase = 1;
  bool terminal = false;  // nothing left to refine
};

/// Next plan from the main effects of the current one (effects[i] belongs to plan.active[i]).
/// Phase 1: significant aggregates are replaced by their detailed factors, significant detailed
/// factors are kept, the rest dropped; if nothing is significant the factor with the largest
/// |effect| is kept. When no aggregate was decomposed the plan moves to phase 2 and densifies.
/// Phase 2: kept factors go to four levels; a plan already at four levels is terminal.
/// Factors beyond what a design of max_strategies runs can carry are dropped, smallest |effect|
/// first.
FactorPlan refine_plan(const FactorPlan& plan, const std::vector<doe::Effect>& effects, std::size_t max_strategies);

/// Number of strategies the plan produces.
std::size_t strategy_count(const FactorPlan& plan, std::size_t max_strategies);

}  // namespace duopoly::plan
