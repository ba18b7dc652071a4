#include "duopoly/game.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "duopoly/error.hpp"

namespace duopoly::game {

std::uint64_t symmetric_profile_count(std::uint64_t s) { return (s * s - s) / 2 + s; }

void PayoffSamples::add(std::uint64_t id, double player1, double player2) {
  ids.push_back(id);
  values[0].push_back(player1);
  values[1].push_back(player2);
}

void PayoffSamples::merge(const PayoffSamples& other) {
  std::vector<std::size_t> order(ids.size() + other.ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto id_of = [&](std::size_t k) { return k < ids.size() ? ids[k] : other.ids[k - ids.size()]; };
  auto value_of = [&](std::size_t p, std::size_t k) {
    return k < ids.size() ? values[p][k] : other.values[p][k - ids.size()];
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return id_of(x) < id_of(y); });
  PayoffSamples out;
  for (std::size_t k : order) out.add(id_of(k), value_of(0, k), value_of(1, k));
  *this = std::move(out);
}

PayoffSamples PayoffSamples::swapped() const {
  PayoffSamples s = *this;
  std::swap(s.values[0], s.values[1]);
  return s;
}

EmpiricalGame::EmpiricalGame(std::size_t strategies, bool symmetric)
    : strategies_(strategies), symmetric_(symmetric) {
  if (strategies == 0) throw ParameterError("a game needs at least one strategy");
  const std::size_t cells = symmetric ? symmetric_profile_count(strategies) : strategies * strategies;
  cells_.resize(cells);
  summaries_.resize(cells);
  summary_only_.resize(cells, false);
}

std::size_t EmpiricalGame::slot(Profile p, bool& swapped) const {
  auto [a, b] = p;
  if (a >= strategies_ || b >= strategies_) throw ParameterError("strategy index out of range");
  swapped = false;
  if (!symmetric_) return a * strategies_ + b;
  if (a > b) {
    std::swap(a, b);
    swapped = true;
  }
  return a * (2 * strategies_ - a + 1) / 2 + (b - a);
}

std::vector<Profile> EmpiricalGame::stored_profiles() const {
  std::vector<Profile> out;
  for (std::size_t a = 0; a < strategies_; ++a)
    for (std::size_t b = symmetric_ ? a : 0; b < strategies_; ++b) out.emplace_back(a, b);
  return out;
}

std::vector<Profile> EmpiricalGame::missing() const {
  std::vector<Profile> out;
  for (Profile p : stored_profiles())
    if (!has(p)) out.push_back(p);
  return out;
}

bool EmpiricalGame::complete() const {
  return std::all_of(cells_.begin(), cells_.end(), [](const auto& c) { return c.has_value(); });
}

bool EmpiricalGame::has(Profile p) const {
  bool sw;
  return cells_[slot(p, sw)].has_value();
}

void EmpiricalGame::set(Profile p, PayoffSamples samples) {
  if (samples.size() == 0) throw ParameterError("empty payoff sample set");
  bool sw;
  const std::size_t k = slot(p, sw);
  cells_[k] = sw ? samples.swapped() : std::move(samples);
  summary_only_[k] = false;
  refresh(k);
}

void EmpiricalGame::set_summaries(Profile p, const std::array<stats::Summary, 2>& s) {
  bool sw;
  const std::size_t k = slot(p, sw);
  cells_[k] = PayoffSamples{};
  summary_only_[k] = true;
  summaries_[k] = sw ? std::array<stats::Summary, 2>{s[1], s[0]} : s;
}

bool EmpiricalGame::summary_only(Profile p) const {
  bool sw;
  return summary_only_[slot(p, sw)];
}

void EmpiricalGame::add_samples(Profile p, const PayoffSamples& samples) {
  bool sw;
  const std::size_t k = slot(p, sw);
  if (!cells_[k]) {
    set(p, samples);
    return;
  }
  if (summary_only_[k]) throw InsufficientDataError("profile holds statistics only, samples cannot be added");
  cells_[k]->merge(sw ? samples.swapped() : samples);
  refresh(k);
}

PayoffSamples EmpiricalGame::samples(Profile p) const {
  bool sw;
  const auto& c = cells_[slot(p, sw)];
  if (!c) throw IncompleteGameError({p}, "profile has no samples");
  return sw ? c->swapped() : *c;
}

void EmpiricalGame::set_trim(std::size_t k) {
  trim_ = k;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i] && !summary_only_[i]) refresh(i);
}

void EmpiricalGame::refresh(std::size_t k) {
  for (std::size_t p = 0; p < 2; ++p) {
    const auto& v = cells_[k]->values[p];
    summaries_[k][p] = trim_ == 0 ? stats::summarize(v) : stats::summarize(stats::trim_samples(v, trim_));
  }
}

const stats::Summary& EmpiricalGame::summary(std::size_t player, Profile p) const {
  if (player > 1) throw ParameterError("player index must be 0 or 1");
  bool sw;
  const std::size_t k = slot(p, sw);
  if (!cells_[k]) throw IncompleteGameError({p}, "profile has no samples");
  return summaries_[k][sw ? 1 - player : player];
}

std::vector<double> EmpiricalGame::values(std::size_t player, Profile p) const {
  if (player > 1) throw ParameterError("player index must be 0 or 1");
  bool sw;
  const std::size_t k = slot(p, sw);
  if (!cells_[k]) throw IncompleteGameError({p}, "profile has no samples");
  if (summary_only_[k]) throw InsufficientDataError("profile holds statistics only");
  const auto& v = cells_[k]->values[sw ? 1 - player : player];
  return trim_ == 0 ? v : stats::trim_samples(v, trim_);
}

void EmpiricalGame::require_complete() const {
  auto m = missing();
  if (!m.empty()) {
    std::string what = "game is missing " + std::to_string(m.size()) + " profile(s):";
    for (std::size_t i = 0; i < m.size() && i < 8; ++i)
      what += " (" + std::to_string(m[i].first) + "," + std::to_string(m[i].second) + ")";
    if (m.size() > 8) what += " ...";
    throw IncompleteGameError(std::move(m), what);
  }
}

namespace {

Profile with_strategy(Profile p, std::size_t player, std::size_t s) {
  if (player == 0) p.first = s;
  else p.second = s;
  return p;
}

std::size_t own(Profile p, std::size_t player) { return player == 0 ? p.first : p.second; }

}  // namespace

std::vector<Profile> deviation_set(const EmpiricalGame& g, Profile p, std::size_t player) {
  if (player > 1) throw ParameterError("player index must be 0 or 1");
  std::vector<Profile> out;
  out.reserve(g.strategies());
  for (std::size_t s = 0; s < g.strategies(); ++s) out.push_back(with_strategy(p, player, s));
  return out;
}

double player_regret(const EmpiricalGame& g, Profile p, std::size_t player) {
  if (g.strategies() < 2) throw ParameterError("regret is undefined with a single strategy");
  const double base = g.mean(player, p);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < g.strategies(); ++s) {
    if (s == own(p, player)) continue;
    best = std::max(best, g.mean(player, with_strategy(p, player, s)) - base);
  }
  return best;
}

double regret(const EmpiricalGame& g, Profile p) {
  return std::max(player_regret(g, p, 0), player_regret(g, p, 1));
}

std::vector<std::size_t> best_responses(const EmpiricalGame& g, std::size_t player, std::size_t opponent) {
  std::vector<std::size_t> out;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < g.strategies(); ++s) {
    const Profile p = player == 0 ? Profile{s, opponent} : Profile{opponent, s};
    const double u = g.mean(player, p);
    if (u > best) {
      best = u;
      out.assign(1, s);
    } else if (u == best) {
      out.push_back(s);
    }
  }
  return out;
}

std::vector<Profile> pure_nash(const EmpiricalGame& g, double epsilon) {
  if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be >= 0");
  g.require_complete();
  const std::size_t n = g.strategies();
  // best payoff of each player against each opponent strategy, shared by every candidate
  std::vector<double> best1(n), best2(n);
  for (std::size_t o = 0; o < n; ++o) {
    best1[o] = g.mean(0, {best_responses(g, 0, o).front(), o});
    best2[o] = g.mean(1, {o, best_responses(g, 1, o).front()});
  }
  std::vector<Profile> out;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (g.mean(0, {a, b}) + epsilon >= best1[b] && g.mean(1, {a, b}) + epsilon >= best2[a]) out.emplace_back(a, b);
  return out;
}

Profile best_response_search(const EmpiricalGame& g, Profile start, double epsilon, std::size_t max_rounds) {
  Profile p = start;
  for (std::size_t r = 0; r < max_rounds; ++r) {
    bool moved = false;
    for (std::size_t player = 0; player < 2; ++player) {
      const std::size_t br = best_responses(g, player, player == 0 ? p.second : p.first).front();
      const Profile q = with_strategy(p, player, br);
      if (g.mean(player, q) > g.mean(player, p) + epsilon) {
        p = q;
        moved = true;
      }
    }
    if (!moved) break;
  }
  return p;
}

}  // namespace duopoly::game
