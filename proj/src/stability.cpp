#include "duopoly/stability.hpp"

#include <algorithm>
#include <cmath>

#include "duopoly/error.hpp"
#include "duopoly/parallel.hpp"
#include "duopoly/rng.hpp"

namespace duopoly::gsa {

std::string_view name(StabilityClass c) noexcept {
  switch (c) {
    case StabilityClass::asymptotically_stable: return "AS";
    case StabilityClass::marginally_stable: return "MS";
    case StabilityClass::instable: return "Instable";
  }
  return "";
}

std::string_view name(UpdateRule r) noexcept {
  return r == UpdateRule::alternating ? "alternating" : "simultaneous";
}

void StabilityOptions::validate() const {
  if (steps == 0) throw ParameterError("stability steps must be positive");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) throw ParameterError("window_fraction must lie in (0, 1]");
}

namespace {

struct Payoffs {
  std::size_t s = 0;
  std::vector<double> mean[2];  // [player][a*s+b]
  std::vector<double> sd[2];    // standard error of the mean
  double m(std::size_t p, std::size_t a, std::size_t b) const { return mean[p][a * s + b]; }
};

Payoffs snapshot(const game::EmpiricalGame& g) {
  Payoffs out;
  out.s = g.strategies();
  for (std::size_t p = 0; p < 2; ++p) {
    out.mean[p].resize(out.s * out.s);
    out.sd[p].resize(out.s * out.s);
  }
  for (std::size_t a = 0; a < out.s; ++a)
    for (std::size_t b = 0; b < out.s; ++b)
      for (std::size_t p = 0; p < 2; ++p) {
        const stats::Summary& sm = g.summary(p, {a, b});
        out.mean[p][a * out.s + b] = sm.mean;
        out.sd[p][a * out.s + b] = sm.n > 0 ? std::sqrt(sm.variance / static_cast<double>(sm.n)) : 0.0;
      }
  return out;
}

// Player p's (noisy) best reply when the opponent plays `other`.
std::size_t best_reply(const Payoffs& u, std::size_t p, std::size_t other, bool noisy, Rng& rng,
                       std::vector<std::size_t>& ties) {
  ties.clear();
  double best = -INFINITY;
  for (std::size_t c = 0; c < u.s; ++c) {
    const std::size_t idx = p == 0 ? c * u.s + other : other * u.s + c;
    double v = u.mean[p][idx];
    if (noisy) v += normal(rng, u.sd[p][idx]);
    if (v > best) {
      best = v;
      ties.assign(1, c);
    } else if (v == best) {
      ties.push_back(c);
    }
  }
  if (ties.size() == 1) return ties.front();
  return ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng)];
}

}  // namespace

StabilityResult stability_analysis(const game::EmpiricalGame& g, game::Profile solution, double epsilon,
                                   double tolerance, const StabilityOptions& options, std::uint64_t seed) {
  options.validate();
  g.require_complete();
  const std::size_t s = g.strategies();
  if (solution.first >= s || solution.second >= s) throw ParameterError("solution profile outside the game");
  if (epsilon < 0.0 || tolerance < 0.0) throw ParameterError("epsilon and tolerance must be nonnegative");

  const Payoffs u = snapshot(g);
  const double target[2] = {u.m(0, solution.first, solution.second), u.m(1, solution.first, solution.second)};
  const std::size_t window = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(static_cast<double>(options.steps) * options.window_fraction)));

  StabilityResult res;
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b) res.initial.push_back({a, b});
  res.classes.resize(res.initial.size());
  res.final_profiles.resize(res.initial.size());

  parallel_for(res.initial.size(), options.jobs, [&](std::size_t i) {
    Rng rng(derive_seed(seed, {res.initial[i].first, res.initial[i].second}));
    std::vector<std::size_t> ties;
    std::size_t cur[2] = {res.initial[i].first, res.initial[i].second};
    double dev = 0.0;  // largest payoff distance from the solution over the window
    for (std::size_t t = 0; t < options.steps; ++t) {
      if (options.rule == UpdateRule::alternating) {
        const std::size_t p = t % 2;
        cur[p] = best_reply(u, p, cur[1 - p], options.noisy, rng, ties);
      } else {
        const std::size_t n0 = best_reply(u, 0, cur[1], options.noisy, rng, ties);
        const std::size_t n1 = best_reply(u, 1, cur[0], options.noisy, rng, ties);
        cur[0] = n0;
        cur[1] = n1;
      }
      if (t + window >= options.steps)
        for (std::size_t p = 0; p < 2; ++p) dev = std::max(dev, std::fabs(u.m(p, cur[0], cur[1]) - target[p]));
    }
    const double slack = 1e-9 * std::max({1.0, std::fabs(target[0]), std::fabs(target[1])});
    StabilityClass c = StabilityClass::instable;
    if (dev <= tolerance + slack)
      c = StabilityClass::asymptotically_stable;
    else if (dev <= epsilon + slack)
      c = StabilityClass::marginally_stable;
    res.classes[i] = c;
    res.final_profiles[i] = {cur[0], cur[1]};
  });

  std::size_t counts[3] = {0, 0, 0};
  for (StabilityClass c : res.classes) ++counts[static_cast<int>(c)];
  const double total = static_cast<double>(res.classes.size());
  res.ratios.asymptotic = static_cast<double>(counts[0]) / total;
  res.ratios.marginal = static_cast<double>(counts[1]) / total;
  res.ratios.instable = static_cast<double>(counts[2]) / total;
  return res;
}

}  // namespace duopoly::gsa
