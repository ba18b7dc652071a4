#include "duopoly/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "duopoly/error.hpp"
#include "duopoly/kernels.hpp"

namespace duopoly::stats {

double Summary::sd() const { return std::sqrt(variance); }

Summary summarize(std::span<const double> x) {
  Summary s;
  s.n = x.size();
  if (s.n == 0) return s;
  s.mean = kernels::sum(x) / static_cast<double>(s.n);
  if (s.n >= 2) s.variance = kernels::sum_squared_deviation(x, s.mean) / static_cast<double>(s.n - 1);
  return s;
}

std::vector<double> trim_samples(std::span<const double> x, std::size_t k) {
  if (x.size() <= 2 * k) throw InsufficientDataError("trimming would remove every sample");
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  return {v.begin() + static_cast<std::ptrdiff_t>(k), v.end() - static_cast<std::ptrdiff_t>(k)};
}

Interval confidence_interval(const Summary& s, double alpha) {
  if (s.n < 2) throw InsufficientDataError("confidence interval needs at least two samples");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  const boost::math::students_t dist(static_cast<double>(s.n - 1));
  const double t = boost::math::quantile(boost::math::complement(dist, alpha / 2.0));
  return {s.mean, t * s.sd() / std::sqrt(static_cast<double>(s.n))};
}

Interval confidence_interval(std::span<const double> x, double alpha) {
  return confidence_interval(summarize(x), alpha);
}

TestResult welch_t_test(const Summary& a, const Summary& b, Alternative alt) {
  if (a.n < 2 || b.n < 2) throw InsufficientDataError("t-test needs at least two samples per group");
  const double va = a.variance / static_cast<double>(a.n);
  const double vb = b.variance / static_cast<double>(b.n);
  const double se2 = va + vb;
  const double diff = a.mean - b.mean;
  TestResult r;
  if (se2 == 0.0) {
    // degenerate: both groups constant
    r.df = static_cast<double>(a.n + b.n - 2);
    if (diff == 0.0) {
      r.t = 0.0;
      r.p = alt == Alternative::two_sided ? 1.0 : 0.5;
    } else {
      r.t = diff > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      r.p = alt == Alternative::two_sided ? 0.0 : (diff < 0.0 ? 0.0 : 1.0);
    }
    return r;
  }
  r.t = diff / std::sqrt(se2);
  r.df = se2 * se2 /
         (va * va / static_cast<double>(a.n - 1) + vb * vb / static_cast<double>(b.n - 1));
  const boost::math::students_t dist(r.df);
  if (alt == Alternative::two_sided) {
    r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
  } else {
    r.p = boost::math::cdf(dist, r.t);
  }
  r.p = std::clamp(r.p, 0.0, 1.0);
  return r;
}

TestResult welch_t_test(std::span<const double> a, std::span<const double> b, Alternative alt) {
  return welch_t_test(summarize(a), summarize(b), alt);
}

double z_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  return boost::math::quantile(boost::math::complement(boost::math::normal(), alpha / 2.0));
}

double ecvi_gain(const Summary& s, std::size_t q, double alpha) {
  if (s.n < 2) throw InsufficientDataError("value of information needs at least two samples");
  const double p = static_cast<double>(s.n);
  const double z = z_quantile(alpha);
  return z * s.sd() * (1.0 / std::sqrt(p) - 1.0 / std::sqrt(p + static_cast<double>(q)));
}

void validate(const SamplingPolicy& p) {
  if (p.initial < 2) throw ParameterError("initial sample size must be >= 2");
  if (2 * p.trim >= p.initial) throw ParameterError("2*trim must be smaller than the initial sample size");
  if (p.initial - 2 * p.trim < 2) throw ParameterError("fewer than two samples survive trimming");
  if (p.cap < p.initial - 2 * p.trim) throw ParameterError("N_s must be >= the effective initial sample size");
  if (p.batch == 0) throw ParameterError("batch must be >= 1");
  if (!(p.ecvi_limit >= 0.0)) throw ParameterError("ECVI lower limit must be >= 0");
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
}

std::size_t decide_sample_size(const Summary& s, const SamplingPolicy& policy) {
  if (s.n < 2) throw InsufficientDataError("value of information needs at least two samples");
  if (policy.batch == 0) throw ParameterError("batch must be >= 1");
  const double z = z_quantile(policy.alpha);
  std::size_t t = s.n;
  while (t < policy.cap && z * s.sd() / std::sqrt(static_cast<double>(t)) > policy.ecvi_limit) t += policy.batch;
  return std::max(s.n, std::min(t, policy.cap));
}

}  // namespace duopoly::stats
