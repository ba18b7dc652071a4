#include "duopoly/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace duopoly::kernels::avx2 {

#if defined(__AVX2__)

bool compiled() noexcept { return true; }

void motivation(const AgentColumns& agents, std::span<const double> influence, const BrandTerms& brand,
                std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d pressure = _mm256_set1_pd(brand.price_pressure);
  const __m256d price = _mm256_set1_pd(brand.effective_price);
  const __m256d ad = _mm256_set1_pd(brand.ad);
  const __m256d pm = _mm256_set1_pd(brand.pm);
  const __m256d force = _mm256_set1_pd(brand.force);

  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d sens_p = _mm256_sub_pd(_mm256_loadu_pd(agents.socio.data() + k), pressure);
    const __m256d sus_ad = _mm256_mul_pd(force, _mm256_loadu_pd(agents.init_ad.data() + k));
    const __m256d sens_pm = _mm256_mul_pd(force, _mm256_loadu_pd(agents.init_pm.data() + k));
    const __m256d ft = _mm256_mul_pd(force, _mm256_loadu_pd(agents.init_ft.data() + k));
    __m256d m = _mm256_mul_pd(sens_p, price);
    m = _mm256_add_pd(m, _mm256_mul_pd(sus_ad, ad));
    m = _mm256_add_pd(m, _mm256_mul_pd(sens_pm, pm));
    m = _mm256_add_pd(m, _mm256_mul_pd(ft, _mm256_loadu_pd(influence.data() + k)));
    _mm256_storeu_pd(out.data() + k, m);
  }
  // tail: same operation order as the vector body
  for (; k < n; ++k) {
    const double sens_p = agents.socio[k] - brand.price_pressure;
    double m = sens_p * brand.effective_price;
    m = m + (brand.force * agents.init_ad[k]) * brand.ad;
    m = m + (brand.force * agents.init_pm[k]) * brand.pm;
    m = m + (brand.force * agents.init_ft[k]) * influence[k];
    out[k] = m;
  }
}

namespace {
double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}
}  // namespace

double sum(std::span<const double> x) {
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x.data() + k));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x.data() + k + 4));
  }
  for (; k + 4 <= n; k += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x.data() + k));
  double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) s += x[k];
  return s;
}

double sum_squared_deviation(std::span<const double> x, double centre) {
  const std::size_t n = x.size();
  const __m256d c = _mm256_set1_pd(centre);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x.data() + k), c);
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(x.data() + k + 4), c);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
  }
  for (; k + 4 <= n; k += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x.data() + k), c);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d, d));
  }
  double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) {
    const double d = x[k] - centre;
    s += d * d;
  }
  return s;
}

#else

bool compiled() noexcept { return false; }

void motivation(const AgentColumns& agents, std::span<const double> influence, const BrandTerms& brand,
                std::span<double> out) {
  scalar::motivation(agents, influence, brand, out);
}
double sum(std::span<const double> x) { return scalar::sum(x); }
double sum_squared_deviation(std::span<const double> x, double centre) {
  return scalar::sum_squared_deviation(x, centre);
}

#endif

}  // namespace duopoly::kernels::avx2
