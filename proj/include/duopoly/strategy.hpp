#pragma once

// Strategic factors, their level grids, strategies as level assignments, and
// the run designs that turn a set of active factors into a strategy list.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace duopoly::strategy {

inline constexpr std::size_t kDetailedFactors = 14;
inline constexpr std::size_t kFactors = 18;

enum class Factor : int {
  vacancy_creation_time,
  layoff_time,
  labor_fulfill_time,
  wip_fulfill_time,
  inv_fulfill_time,
  material_lead_time,
  safety_stock_cov,
  material_inv_cov,
  psens_cost,
  psens_inv,
  mfg_price,
  marketing_budget,  // fraction of the previous period's revenue
  promotion_depth,   // uniform range
  advertising,       // uniform range
  manufacturing,
  logistics,
  pricing,
  marketing,
};

std::string_view name(Factor f) noexcept;
std::optional<Factor> parse_factor(std::string_view s) noexcept;
bool is_aggregate(Factor f) noexcept;
/// Detailed factors of an aggregate, or {f} for a detailed factor.
std::vector<Factor> components(Factor f);
/// Aggregate owning a detailed factor (itself for an aggregate).
Factor parent(Factor f) noexcept;

/// One level of a factor. Scalar factors have lo == hi; range factors are sampled uniformly.
struct Level {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const noexcept { return 0.5 * (lo + hi); }
  bool operator==(const Level&) const = default;
};

inline constexpr std::array<std::string_view, 4> kLevelNames{"L", "ML", "MH", "H"};

/// Four-level grid of every detailed factor (L, ML, MH, H). Factors specified only at L/H get
/// ML and MH by linear interpolation at 1/3 and 2/3.
struct FactorTable {
  std::array<std::array<Level, 4>, kDetailedFactors> levels{};

  static FactorTable defaults();
  const std::array<Level, 4>& operator[](Factor f) const { return levels[static_cast<std::size_t>(f)]; }
  std::array<Level, 4>& operator[](Factor f) { return levels[static_cast<std::size_t>(f)]; }
  void validate() const;
};

/// Concrete value of every detailed factor for one company.
struct CompanyStrategy {
  std::array<Level, kDetailedFactors> values{};
  const Level& operator[](Factor f) const { return values[static_cast<std::size_t>(f)]; }
  Level& operator[](Factor f) { return values[static_cast<std::size_t>(f)]; }
  bool operator==(const CompanyStrategy&) const = default;
};

/// Midpoint between the L and H level of every factor.
CompanyStrategy baseline(const FactorTable& table);

/// Level index 0..3 per active factor, in the order of the owning space's factor list.
using Strategy = std::vector<int>;

struct ActiveFactor {
  Factor factor;
  int levels = 2;  // 2 (L/H) or 4 (L/ML/MH/H)
};

/// Level indices used by a factor with `levels` levels: {0,3} or {0,1,2,3}.
std::vector<int> level_indices(int levels);

/// Applies level `level` of factor f (aggregates set every component) on top of `base`.
void apply_level(CompanyStrategy& base, const FactorTable& table, Factor f, int level);

CompanyStrategy resolve(const std::vector<ActiveFactor>& factors, const Strategy& s, const FactorTable& table,
                        const CompanyStrategy& fixed);

/// Strategy list for the active factors: the full factorial when it has at most `max_runs`
/// entries, otherwise a balanced orthogonal fraction (two-level columns from GF(2) for all-L/H
/// factor sets, GF(4) columns when any factor has four levels; two-level factors on a GF(4)
/// column use L for symbols {0,1} and H for {2,3}). Throws DesignError when no orthogonal
/// fraction of at most `max_runs` runs has enough columns.
std::vector<Strategy> design(const std::vector<ActiveFactor>& factors, std::size_t max_runs);

/// Human-readable label, e.g. "logistics=H,pricing=L".
std::string describe(const std::vector<ActiveFactor>& factors, const Strategy& s);

}  // namespace duopoly::strategy
