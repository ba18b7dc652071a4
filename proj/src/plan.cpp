#include "duopoly/plan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "duopoly/error.hpp"

namespace duopoly::plan {

namespace {

struct Candidate {
  strategy::ActiveFactor factor;
  double priority;  // |effect| of the factor or of the aggregate it came from
};

bool fits(const std::vector<strategy::ActiveFactor>& active, std::size_t max_strategies) {
  try {
    strategy::design(active, max_strategies);
    return true;
  } catch (const DesignError&) {
    return false;
  }
}

// Keeps the highest-priority factors that a design of max_strategies runs can carry; order of
// the survivors is unchanged.
std::vector<strategy::ActiveFactor> trim_to_budget(std::vector<Candidate> cands, std::size_t max_strategies) {
  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cands[a].priority > cands[b].priority; });
  std::vector<bool> keep(cands.size(), true);
  auto collect = [&] {
    std::vector<strategy::ActiveFactor> out;
    for (std::size_t i = 0; i < cands.size(); ++i)
      if (keep[i]) out.push_back(cands[i].factor);
    return out;
  };
  for (std::size_t drop = cands.size(); drop-- > 1;) {
    if (fits(collect(), max_strategies)) break;
    keep[order[drop]] = false;
  }
  auto out = collect();
  // a single four-level factor always fits from 4 runs; fall back to two levels below that
  if (!fits(out, max_strategies))
    for (auto& f : out) f.levels = 2;
  return out;
}

}  // namespace

FactorPlan refine_plan(const FactorPlan& plan, const std::vector<doe::Effect>& effects, std::size_t max_strategies) {
  if (plan.active.empty()) throw ParameterError("factor plan has no active factors");
  if (effects.size() != plan.active.size()) throw ParameterError("one effect per active factor is required");
  if (plan.terminal) return plan;

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < effects.size(); ++i)
    if (effects[i].significant) kept.push_back(i);
  if (kept.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < effects.size(); ++i)
      if (std::fabs(effects[i].effect) > std::fabs(effects[best].effect)) best = i;
    kept.push_back(best);
  }

  FactorPlan next;
  std::vector<Candidate> cands;
  if (plan.phase == 1) {
    bool decomposed = false;
    for (std::size_t i : kept) {
      const auto f = plan.active[i];
      const double pr = std::fabs(effects[i].effect);
      if (strategy::is_aggregate(f.factor)) {
        decomposed = true;
        for (strategy::Factor c : strategy::components(f.factor)) cands.push_back({{c, 2}, pr});
      } else {
        cands.push_back({f, pr});
      }
    }
    if (decomposed) {
      next.phase = 1;
      next.active = trim_to_budget(std::move(cands), max_strategies);
      return next;
    }
  } else {
    for (std::size_t i : kept) cands.push_back({plan.active[i], std::fabs(effects[i].effect)});
  }

  next.phase = 2;
  const bool dense = std::all_of(cands.begin(), cands.end(), [](const Candidate& c) { return c.factor.levels == 4; });
  if (plan.phase == 2 && dense) {
    next.active.clear();
    for (const auto& c : cands) next.active.push_back(c.factor);
    next.terminal = true;
    return next;
  }
  for (auto& c : cands) c.factor.levels = 4;
  next.active = trim_to_budget(std::move(cands), max_strategies);
  return next;
}

std::size_t strategy_count(const FactorPlan& plan, std::size_t max_strategies) {
  return strategy::design(plan.active, max_strategies).size();
}

}  // namespace duopoly::plan
