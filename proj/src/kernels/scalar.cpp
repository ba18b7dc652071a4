#include "duopoly/kernels.hpp"

namespace duopoly::kernels::scalar {

void motivation(const AgentColumns& agents, std::span<const double> influence, const BrandTerms& brand,
                std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double sens_p = agents.socio[k] - brand.price_pressure;
    const double sus_ad = brand.force * agents.init_ad[k];
    const double sens_pm = brand.force * agents.init_pm[k];
    const double ft = brand.force * agents.init_ft[k];
    double m = sens_p * brand.effective_price;
    m = m + sus_ad * brand.ad;
    m = m + sens_pm * brand.pm;
    m = m + ft * influence[k];
    out[k] = m;
  }
}

double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

double sum_squared_deviation(std::span<const double> x, double centre) {
  double s = 0.0;
  for (double v : x) {
    const double d = v - centre;
    s += d * d;
  }
  return s;
}

}  // namespace duopoly::kernels::scalar
