#include "duopoly/strategy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "duopoly/error.hpp"

namespace duopoly::strategy {

namespace {

constexpr std::array<std::string_view, kFactors> kNames{
    "vacancy_creation_time", "layoff_time",     "labor_fulfill_time", "wip_fulfill_time", "inv_fulfill_time",
    "material_lead_time",    "safety_stock_cov", "material_inv_cov",  "psens_cost",       "psens_inv",
    "mfg_price",             "marketing_budget", "promotion_depth",   "advertising",      "manufacturing",
    "logistics",             "pricing",          "marketing"};

std::array<Level, 4> two_level(double lo, double hi) {
  const double d = hi - lo;
  return {Level{lo, lo}, Level{lo + d / 3.0, lo + d / 3.0}, Level{lo + 2.0 * d / 3.0, lo + 2.0 * d / 3.0},
          Level{hi, hi}};
}

std::array<Level, 4> four_level(double a, double b, double c, double d) {
  return {Level{a, a}, Level{b, b}, Level{c, c}, Level{d, d}};
}

std::array<Level, 4> ranges(double step, double start) {
  std::array<Level, 4> out{};
  for (int i = 0; i < 4; ++i) out[i] = Level{start + step * i, start + step * (i + 1)};
  return out;
}

// GF(4) with elements 0, 1, a, a+1 encoded as 0..3; addition is XOR.
int gf4_mul(int x, int y) {
  static constexpr int table[4][4] = {{0, 0, 0, 0}, {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
  return table[x][y];
}

std::vector<Strategy> full_factorial(const std::vector<ActiveFactor>& factors) {
  std::vector<Strategy> out{Strategy{}};
  for (const ActiveFactor& f : factors) {
    std::vector<Strategy> next;
    for (const Strategy& s : out)
      for (int lv : level_indices(f.levels)) {
        Strategy t = s;
        t.push_back(lv);
        next.push_back(std::move(t));
      }
    out = std::move(next);
  }
  return out;
}

// Columns of the saturated two-level design on 2^r runs: base factors, then interactions of odd
// order (keeps main effects clear of two-factor interactions), then even order.
std::vector<unsigned> gf2_columns(int r) {
  std::vector<unsigned> cols;
  for (unsigned v = 1; v < (1u << r); ++v) cols.push_back(v);
  auto key = [r](unsigned v) {
    const int w = std::popcount(v);
    const int cls = (w % 2 == 1) ? w : 2 * r - w + 1;
    return cls;
  };
  // within a class, larger masks first: bit r-1 is the first base factor
  std::stable_sort(cols.begin(), cols.end(), [&](unsigned a, unsigned b) {
    if (key(a) != key(b)) return key(a) < key(b);
    return a > b;
  });
  return cols;
}

// Normalized nonzero vectors of GF(4)^t (first nonzero coordinate 1): unit vectors first.
std::vector<std::vector<int>> gf4_columns(int t) {
  std::vector<std::vector<int>> units, rest;
  const int total = 1 << (2 * t);
  for (int code = 1; code < total; ++code) {
    std::vector<int> v(t);
    for (int i = 0; i < t; ++i) v[i] = (code >> (2 * (t - 1 - i))) & 3;
    const auto first = std::find_if(v.begin(), v.end(), [](int x) { return x != 0; });
    if (*first != 1) continue;
    const int nonzero = static_cast<int>(std::count_if(v.begin(), v.end(), [](int x) { return x != 0; }));
    (nonzero == 1 ? units : rest).push_back(std::move(v));
  }
  units.insert(units.end(), rest.begin(), rest.end());
  return units;
}

}  // namespace

std::string_view name(Factor f) noexcept { return kNames[static_cast<std::size_t>(f)]; }

std::optional<Factor> parse_factor(std::string_view s) noexcept {
  for (std::size_t i = 0; i < kFactors; ++i)
    if (kNames[i] == s) return static_cast<Factor>(i);
  return std::nullopt;
}

bool is_aggregate(Factor f) noexcept { return static_cast<std::size_t>(f) >= kDetailedFactors; }

std::vector<Factor> components(Factor f) {
  using F = Factor;
  switch (f) {
    case F::manufacturing:
      return {F::vacancy_creation_time, F::layoff_time, F::labor_fulfill_time, F::wip_fulfill_time};
    case F::logistics:
      return {F::inv_fulfill_time, F::material_lead_time, F::safety_stock_cov, F::material_inv_cov};
    case F::pricing:
      return {F::psens_cost, F::psens_inv, F::mfg_price};
    case F::marketing:
      return {F::marketing_budget, F::promotion_depth, F::advertising};
    default:
      return {f};
  }
}

Factor parent(Factor f) noexcept {
  const int i = static_cast<int>(f);
  if (is_aggregate(f)) return f;
  if (i <= 3) return Factor::manufacturing;
  if (i <= 7) return Factor::logistics;
  if (i <= 10) return Factor::pricing;
  return Factor::marketing;
}

FactorTable FactorTable::defaults() {
  using F = Factor;
  FactorTable t;
  t[F::vacancy_creation_time] = two_level(1, 5);
  t[F::layoff_time] = two_level(3, 7);
  t[F::labor_fulfill_time] = two_level(4, 12);
  t[F::wip_fulfill_time] = two_level(1, 3);
  t[F::inv_fulfill_time] = four_level(2, 6, 10, 14);
  t[F::material_lead_time] = four_level(1, 3, 5, 7);
  t[F::safety_stock_cov] = four_level(2, 6, 10, 14);
  t[F::material_inv_cov] = four_level(1, 3, 5, 7);
  t[F::psens_cost] = two_level(0.1, 0.9);
  t[F::psens_inv] = two_level(-0.1, -0.9);
  t[F::mfg_price] = two_level(1, 2);
  t[F::marketing_budget] = two_level(0.05, 0.15);
  t[F::promotion_depth] = ranges(0.1, 0.1);
  t[F::advertising] = ranges(0.1, 0.1);
  return t;
}

void FactorTable::validate() const {
  for (std::size_t i = 0; i < kDetailedFactors; ++i)
    for (const Level& l : levels[i])
      if (!std::isfinite(l.lo) || !std::isfinite(l.hi) || l.lo > l.hi)
        throw ParameterError(std::string(kNames[i]) + ": level bounds must be finite with lo <= hi");
}

CompanyStrategy baseline(const FactorTable& table) {
  CompanyStrategy c;
  for (std::size_t i = 0; i < kDetailedFactors; ++i) {
    const Level& l = table.levels[i][0];
    const Level& h = table.levels[i][3];
    c.values[i] = Level{0.5 * (l.lo + h.lo), 0.5 * (l.hi + h.hi)};
  }
  return c;
}

std::vector<int> level_indices(int levels) {
  if (levels == 2) return {0, 3};
  if (levels == 4) return {0, 1, 2, 3};
  throw ParameterError("a factor has 2 or 4 levels");
}

void apply_level(CompanyStrategy& base, const FactorTable& table, Factor f, int level) {
  if (level < 0 || level > 3) throw ParameterError("level index must lie in 0..3");
  for (Factor c : components(f)) base[c] = table[c][static_cast<std::size_t>(level)];
}

CompanyStrategy resolve(const std::vector<ActiveFactor>& factors, const Strategy& s, const FactorTable& table,
                        const CompanyStrategy& fixed) {
  if (s.size() != factors.size()) throw ParameterError("strategy length differs from the active factor count");
  CompanyStrategy c = fixed;
  for (std::size_t i = 0; i < factors.size(); ++i) apply_level(c, table, factors[i].factor, s[i]);
  return c;
}

std::vector<Strategy> design(const std::vector<ActiveFactor>& factors, std::size_t max_runs) {
  if (factors.empty()) return {Strategy{}};
  bool any_four = false;
  double cells = 1.0;
  for (const ActiveFactor& f : factors) {
    level_indices(f.levels);
    any_four = any_four || f.levels == 4;
    cells *= f.levels;
  }
  if (cells <= static_cast<double>(max_runs)) return full_factorial(factors);

  const std::size_t k = factors.size();
  std::vector<Strategy> out;
  if (!any_four) {
    int r = 0;
    while ((std::size_t{1} << (r + 1)) <= max_runs) ++r;
    const auto cols = gf2_columns(r);
    if (r == 0 || cols.size() < k)
      throw DesignError("no two-level orthogonal fraction within " + std::to_string(max_runs) + " runs for " +
                        std::to_string(k) + " factors");
    for (unsigned x = 0; x < (1u << r); ++x) {
      Strategy s(k);
      for (std::size_t j = 0; j < k; ++j) s[j] = (std::popcount(x & cols[j]) % 2) ? 3 : 0;
      out.push_back(std::move(s));
    }
    return out;
  }

  int t = 0;
  while ((std::size_t{1} << (2 * (t + 1))) <= max_runs) ++t;
  const auto cols = gf4_columns(t);
  if (t == 0 || cols.size() < k)
    throw DesignError("no four-level orthogonal fraction within " + std::to_string(max_runs) + " runs for " +
                      std::to_string(k) + " factors");
  const int runs = 1 << (2 * t);
  for (int code = 0; code < runs; ++code) {
    std::vector<int> x(t);
    for (int i = 0; i < t; ++i) x[i] = (code >> (2 * (t - 1 - i))) & 3;
    Strategy s(k);
    for (std::size_t j = 0; j < k; ++j) {
      int sym = 0;
      for (int i = 0; i < t; ++i) sym ^= gf4_mul(cols[j][i], x[i]);
      s[j] = factors[j].levels == 4 ? sym : (sym >= 2 ? 3 : 0);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string describe(const std::vector<ActiveFactor>& factors, const Strategy& s) {
  std::string out;
  for (std::size_t i = 0; i < factors.size() && i < s.size(); ++i) {
    if (i) out += ',';
    out += name(factors[i].factor);
    out += '=';
    out += kLevelNames[static_cast<std::size_t>(s[i])];
  }
  return out;
}

}  // namespace duopoly::strategy
