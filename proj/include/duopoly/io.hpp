#pragma once

// File formats: daily trace CSV, payoff-matrix CSV, iteration report and checkpoint JSON, and
// the plot-data CSVs derived from a list of iteration reports.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "duopoly/game.hpp"
#include "duopoly/gsa.hpp"
#include "duopoly/hybrid.hpp"

namespace duopoly::io {

inline constexpr int kReportSchemaVersion = 1;

/// Header: day,company,price,inv,backlog,shipR,MS,labor,wip. One row per day per company;
/// days start at 1, companies are 1 and 2.
void write_trace_csv(std::ostream& out, const hybrid::ReplicationOutput& rep);

/// Square matrix, rows = player-1 strategy, columns = player-2 strategy. The first row holds the
/// column labels, the first column the row labels. Each cell is "mean;n;variance|mean;n;variance"
/// for players 1 and 2 (trimmed statistics), numbers printed with 17 significant digits.
void write_payoff_matrix_csv(std::ostream& out, const game::EmpiricalGame& g,
                             const std::vector<std::string>& labels = {});

/// Inverse of write_payoff_matrix_csv. The game is symmetric when every cell mirrors its
/// transpose. Cells carry statistics only (see EmpiricalGame::set_summaries).
/// Throws ConfigError with the line/column of a malformed entry.
game::EmpiricalGame read_payoff_matrix_csv(std::istream& in, std::vector<std::string>* labels = nullptr);

/// Iteration report without its runtime, so identical runs produce identical files.
nlohmann::json report_to_json(const gsa::GsaIterationReport& r);
gsa::GsaIterationReport report_from_json(const nlohmann::json& j);

nlohmann::json game_to_json(const game::EmpiricalGame& g);
game::EmpiricalGame game_from_json(const nlohmann::json& j);

nlohmann::json checkpoint_to_json(const gsa::Checkpoint& c);
gsa::Checkpoint checkpoint_from_json(const nlohmann::json& j);

nlohmann::json cross_tests_to_json(const std::vector<gsa::CrossIterationTest>& tests);

/// Writes fig7_equilibrium_share.csv, fig8_neighbor_pvalues.csv, fig9_cross_pvalues.csv,
/// table8_ci.csv and table9_stability.csv into dir.
void write_plot_data(const std::filesystem::path& dir, const std::vector<gsa::GsaIterationReport>& reports,
                     const std::vector<gsa::CrossIterationTest>& cross);

/// JSON text with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace duopoly::io
