#include "duopoly/doe.hpp"

#include <cmath>
#include <limits>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "duopoly/error.hpp"
#include "duopoly/stats.hpp"

namespace duopoly::doe {

Response response_from_samples(std::span<const double> x) {
  const stats::Summary s = stats::summarize(x);
  if (s.n == 0) throw InsufficientDataError("design run without samples");
  Response r;
  r.mean = s.mean;
  if (s.n >= 2) {
    r.var_mean = s.variance / static_cast<double>(s.n);
    r.df = static_cast<double>(s.n - 1);
  }
  return r;
}

namespace {

bool high(int level) { return level >= 2; }

}  // namespace

Analysis doe_significance(const std::vector<std::vector<int>>& levels, const std::vector<Response>& responses,
                          double alpha, bool require_full) {
  if (levels.empty()) throw DesignError("design has no runs");
  if (levels.size() != responses.size()) throw DesignError("one response per run is required");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  const std::size_t k = levels.front().size();
  for (const auto& row : levels) {
    if (row.size() != k) throw DesignError("runs differ in factor count");
    for (int v : row)
      if (v < 0 || v > 3) throw DesignError("level index outside 0..3");
  }
  const std::size_t runs = levels.size();

  if (require_full) {
    std::set<std::vector<bool>> cells;
    for (const auto& row : levels) {
      std::vector<bool> c(k);
      for (std::size_t f = 0; f < k; ++f) c[f] = high(row[f]);
      cells.insert(c);
    }
    if (k < 63 && cells.size() != (std::size_t{1} << k))
      throw DesignError("factorial design is missing " + std::to_string((std::size_t{1} << k) - cells.size()) +
                        " cell(s)");
  }

  Analysis out;
  for (std::size_t f = 0; f < k; ++f) {
    std::size_t nh = 0;
    for (const auto& row : levels) nh += high(row[f]);
    if (nh * 2 != runs) throw DesignError("factor " + std::to_string(f) + " is not balanced between low and high");

    const double w = 1.0 / static_cast<double>(nh);
    double eff = 0.0, var = 0.0, df_den = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
      const double sign = high(levels[r][f]) ? 1.0 : -1.0;
      eff += sign * w * responses[r].mean;
      const double term = w * w * responses[r].var_mean;
      var += term;
      if (responses[r].df > 0.0) df_den += term * term / responses[r].df;
    }
    Effect e;
    e.factor = f;
    e.effect = eff;
    e.std_error = std::sqrt(var);
    if (var > 0.0) {
      e.df = df_den > 0.0 ? var * var / df_den : std::numeric_limits<double>::infinity();
      e.t = eff / e.std_error;
      if (std::isfinite(e.df)) {
        const boost::math::students_t dist(e.df);
        e.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(e.t)));
      } else {
        e.p_value = std::erfc(std::fabs(e.t) / std::sqrt(2.0));
      }
    } else {
      // no replicate noise: any nonzero effect is exact
      e.t = eff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), eff);
      e.p_value = eff == 0.0 ? 1.0 : 0.0;
    }
    e.significant = e.p_value < alpha;
    out.main.push_back(e);
  }

  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) {
      double same = 0.0, diff = 0.0;
      std::size_t ns = 0, nd = 0;
      for (std::size_t r = 0; r < runs; ++r) {
        if (high(levels[r][a]) == high(levels[r][b])) {
          same += responses[r].mean;
          ++ns;
        } else {
          diff += responses[r].mean;
          ++nd;
        }
      }
      Interaction it{a, b, 0.0};
      if (ns && nd) it.effect = same / static_cast<double>(ns) - diff / static_cast<double>(nd);
      out.interactions.push_back(it);
    }
  return out;
}

}  // namespace duopoly::doe
