#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace duopoly::stats {

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased; 0 when n < 2
  double sd() const;
};

Summary summarize(std::span<const double> x);

/// Sorted copy with the k smallest and k largest values removed. Requires size > 2k.
std::vector<double> trim_samples(std::span<const double> x, std::size_t k);

struct Interval {
  double mean = 0.0;
  double half_width = 0.0;
};

/// mean +- t_{alpha/2, n-1} * s / sqrt(n). Requires n >= 2.
Interval confidence_interval(std::span<const double> x, double alpha);
Interval confidence_interval(const Summary& s, double alpha);

enum class Alternative { two_sided, less };

struct TestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

/// Welch's unequal-variance t-test; `less` tests H1: mean(a) < mean(b). Requires |a|, |b| >= 2.
TestResult welch_t_test(std::span<const double> a, std::span<const double> b, Alternative alt);
TestResult welch_t_test(const Summary& a, const Summary& b, Alternative alt);

/// Upper alpha/2 point of the standard normal.
double z_quantile(double alpha);

/// Expected reduction of the CI half-width from q further samples under a normal model:
/// z_{alpha/2} * s * (1/sqrt(p) - 1/sqrt(p+q)). Throws InsufficientDataError when p < 2.
double ecvi_gain(const Summary& s, std::size_t q, double alpha);

struct SamplingPolicy {
  std::size_t initial = 70;  // n per profile
  std::size_t trim = 10;     // per tail
  std::size_t cap = 500;     // N_s, effective samples
  double ecvi_limit = 10.0;  // ECVI_L, currency
  std::size_t batch = 50;
  double alpha = 0.05;
};

void validate(const SamplingPolicy& p);

/// Effective sample size for a profile: grows from s.n in steps of `batch` while the remaining
/// value of information z*s/sqrt(t) still exceeds ECVI_L, never beyond N_s and never below s.n.
std::size_t decide_sample_size(const Summary& s, const SamplingPolicy& policy);

}  // namespace duopoly::stats
