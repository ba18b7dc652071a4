#pragma once

// Experiment configuration: a versioned JSON key tree. Every key is optional except
// schema_version; omitted keys take the defaults shown by `default_config_json()`.

#include <array>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "duopoly/gsa.hpp"
#include "duopoly/hybrid.hpp"
#include "duopoly/strategy.hpp"

namespace duopoly::config {

inline constexpr int kSchemaVersion = 1;

struct ExperimentConfig {
  hybrid::HybridConfig sim;
  gsa::GsaConfig gsa = gsa::GsaConfig::paper_schedule();
  std::array<strategy::CompanyStrategy, 2> profile;  // companies used by simulate/estimate
  std::size_t replications = 1;                     // simulate/estimate sample count
  std::string out = "out";
};

/// Defaults: the full factor table, the five-iteration schedule, 200 agents, 100 days.
ExperimentConfig default_config();
nlohmann::json default_config_json();

/// Resolves a config tree on top of the defaults. Unknown keys, wrong types and out-of-range
/// values throw ConfigError naming the key path (e.g. "factors.psens_inv[3]").
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Fully materialized tree of a config; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const ExperimentConfig& c);

}  // namespace duopoly::config
