#pragma once

// Main-effect screening on a balanced two-level (or four-level collapsed to
// low/high) design.

#include <cstddef>
#include <span>
#include <vector>

namespace duopoly::doe {

/// Estimated response of one design run.
struct Response {
  double mean = 0.0;
  double var_mean = 0.0;  // variance of `mean` as an estimate
  double df = 0.0;        // degrees of freedom of var_mean; 0 when it carries no information
};

/// mean, s^2/n, n-1.
Response response_from_samples(std::span<const double> x);

struct Effect {
  std::size_t factor = 0;
  double effect = 0.0;  // mean(high) - mean(low)
  double std_error = 0.0;
  double df = 0.0;
  double t = 0.0;
  double p_value = 1.0;
  bool significant = false;
};

struct Interaction {
  std::size_t a = 0;
  std::size_t b = 0;
  double effect = 0.0;  // mean(same side) - mean(opposite sides)
};

struct Analysis {
  std::vector<Effect> main;
  std::vector<Interaction> interactions;  // reported only
};

/// levels[r][f] is the level index (0..3) of factor f in run r; indices 2 and 3 count as high.
/// Every factor must split the runs into equal low and high halves; with require_full every
/// low/high combination must also occur. Violations throw DesignError.
/// Effects are tested against zero with a Welch-Satterthwaite t statistic; significant iff p < alpha.
Analysis doe_significance(const std::vector<std::vector<int>>& levels, const std::vector<Response>& responses,
                          double alpha, bool require_full = false);

}  // namespace duopoly::doe
