#pragma once

// Data-parallel inner loops of the simulator and the statistics code.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The variant is chosen once at startup from CPUID; DUOPOLY_ISA=scalar
// in the environment (or force_isa) pins the scalar path. The motivation kernel
// is elementwise and bit-identical across variants; reductions agree to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace duopoly::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Best variant supported by this CPU and build.
Isa detected_isa() noexcept;

/// Variant currently used by the dispatching entry points.
Isa active_isa() noexcept;

/// Overrides dispatch; requests for an unsupported variant fall back to scalar.
void force_isa(Isa isa) noexcept;

/// Brand-level terms of the purchase motivation shared by every agent in one step.
struct BrandTerms {
  double effective_price;  // Price * (1 - Pm)
  double price_pressure;   // s^(effective_price - price_sum)
  double ad;
  double pm;
  double force;  // marketing force MF
};

/// Per-agent attributes, one entry per agent (structure of arrays).
struct AgentColumns {
  std::span<const double> socio;      // m_agent
  std::span<const double> init_ad;    // I_a
  std::span<const double> init_pm;    // I_p
  std::span<const double> init_ft;    // I_f
};

/// out[k] = SensP*x + SusAd*ad + SensPm*pm + Ft*inf[k], with
/// SensP = socio[k] - pressure, SusAd = MF*I_a, SensPm = MF*I_p, Ft = MF*I_f.
void motivation(const AgentColumns& agents, std::span<const double> influence, const BrandTerms& brand,
                std::span<double> out);

double sum(std::span<const double> x);

/// Sum of (x - centre)^2.
double sum_squared_deviation(std::span<const double> x, double centre);

namespace scalar {
void motivation(const AgentColumns& agents, std::span<const double> influence, const BrandTerms& brand,
                std::span<double> out);
double sum(std::span<const double> x);
double sum_squared_deviation(std::span<const double> x, double centre);
}  // namespace scalar

namespace avx2 {
bool compiled() noexcept;
void motivation(const AgentColumns& agents, std::span<const double> influence, const BrandTerms& brand,
                std::span<double> out);
double sum(std::span<const double> x);
double sum_squared_deviation(std::span<const double> x, double centre);
}  // namespace avx2

}  // namespace duopoly::kernels
