#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "duopoly/kernels.hpp"

namespace duopoly::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("DUOPOLY_ISA"); env && std::string_view(env) == "scalar") return Isa::scalar;
  return detected_isa();
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() noexcept { return (avx2::compiled() && cpu_has_avx2()) ? Isa::avx2 : Isa::scalar; }

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) noexcept {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) isa = Isa::scalar;
  current().store(isa, std::memory_order_relaxed);
}

void motivation(const AgentColumns& agents, std::span<const double> influence, const BrandTerms& brand,
                std::span<double> out) {
  const std::size_t n = out.size();
  if (influence.size() != n || agents.socio.size() != n || agents.init_ad.size() != n ||
      agents.init_pm.size() != n || agents.init_ft.size() != n)
    throw std::invalid_argument("motivation: column lengths differ");
  if (active_isa() == Isa::avx2) return avx2::motivation(agents, influence, brand, out);
  scalar::motivation(agents, influence, brand, out);
}

double sum(std::span<const double> x) {
  return active_isa() == Isa::avx2 ? avx2::sum(x) : scalar::sum(x);
}

double sum_squared_deviation(std::span<const double> x, double centre) {
  return active_isa() == Isa::avx2 ? avx2::sum_squared_deviation(x, centre)
                                   : scalar::sum_squared_deviation(x, centre);
}

}  // namespace duopoly::kernels
