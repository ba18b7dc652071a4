#include "duopoly/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "duopoly/error.hpp"

namespace duopoly::io {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Non-finite values are stored as strings; JSON has no literal for them.
json real(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double real_in(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ConfigError("", "expected a number in report");
}

json pair_json(game::Profile p) { return json::array({p.first, p.second}); }
game::Profile pair_in(const json& j) { return {j.at(0).get<std::size_t>(), j.at(1).get<std::size_t>()}; }

json profiles_json(const std::vector<game::Profile>& ps) {
  json a = json::array();
  for (auto p : ps) a.push_back(pair_json(p));
  return a;
}

std::vector<game::Profile> profiles_in(const json& j) {
  std::vector<game::Profile> out;
  for (const auto& e : j) out.push_back(pair_in(e));
  return out;
}

json factors_json(const std::vector<strategy::ActiveFactor>& fs) {
  json a = json::array();
  for (const auto& f : fs) a.push_back({{"factor", std::string(strategy::name(f.factor))}, {"levels", f.levels}});
  return a;
}

std::vector<strategy::ActiveFactor> factors_in(const json& j) {
  std::vector<strategy::ActiveFactor> out;
  for (const auto& e : j) {
    const auto f = strategy::parse_factor(e.at("factor").get<std::string>());
    if (!f) throw ConfigError("factor", "unknown factor in report");
    out.push_back({*f, e.at("levels").get<int>()});
  }
  return out;
}

json estimate_json(const gsa::SolutionEstimate& e) {
  return {{"n", e.n},
          {"mean", json::array({real(e.mean[0]), real(e.mean[1])})},
          {"half_width", json::array({real(e.half_width[0]), real(e.half_width[1])})}};
}

gsa::SolutionEstimate estimate_in(const json& j) {
  gsa::SolutionEstimate e;
  e.n = j.at("n").get<std::size_t>();
  for (std::size_t p = 0; p < 2; ++p) {
    e.mean[p] = real_in(j.at("mean").at(p));
    e.half_width[p] = real_in(j.at("half_width").at(p));
  }
  return e;
}

json reals(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(real(x));
  return a;
}

std::vector<double> reals_in(const json& j) {
  std::vector<double> out;
  for (const auto& e : j) out.push_back(real_in(e));
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  if (s.empty()) throw ConfigError(where, "empty number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw ConfigError(where, "malformed number '" + s + "'");
  return v;
}

stats::Summary parse_stats(const std::string& s, const std::string& where) {
  const auto a = s.find(';');
  const auto b = s.find(';', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) throw ConfigError(where, "expected mean;n;variance");
  stats::Summary out;
  out.mean = parse_double(s.substr(0, a), where);
  const double n = parse_double(s.substr(a + 1, b - a - 1), where);
  if (n < 1 || n != std::floor(n)) throw ConfigError(where, "sample count must be a positive integer");
  out.n = static_cast<std::size_t>(n);
  out.variance = parse_double(s.substr(b + 1), where);
  if (out.variance < 0) throw ConfigError(where, "variance must be >= 0");
  return out;
}

std::string stats_cell(const stats::Summary& s) {
  return fmt(s.mean) + ";" + std::to_string(s.n) + ";" + fmt(s.variance);
}

}  // namespace

void write_trace_csv(std::ostream& out, const hybrid::ReplicationOutput& rep) {
  out << "day,company,price,inv,backlog,shipR,MS,labor,wip\n";
  for (int d = 0; d < rep.days; ++d)
    for (std::size_t c = 0; c < 2; ++c) {
      const auto& s = rep.series[c];
      out << d + 1 << ',' << c + 1 << ',' << fmt(s.price[d]) << ',' << fmt(s.inv[d]) << ',' << fmt(s.backlog[d]) << ','
          << fmt(s.ship[d]) << ',' << fmt(s.share[d]) << ',' << fmt(s.labor[d]) << ',' << fmt(s.wip[d]) << '\n';
    }
}

void write_payoff_matrix_csv(std::ostream& out, const game::EmpiricalGame& g, const std::vector<std::string>& labels) {
  const std::size_t s = g.strategies();
  auto label = [&](std::size_t i) { return i < labels.size() ? labels[i] : "s" + std::to_string(i); };
  out << "strategy";
  for (std::size_t b = 0; b < s; ++b) out << ',' << quote(label(b));
  out << '\n';
  for (std::size_t a = 0; a < s; ++a) {
    out << quote(label(a));
    for (std::size_t b = 0; b < s; ++b)
      out << ',' << stats_cell(g.summary(0, {a, b})) << '|' << stats_cell(g.summary(1, {a, b}));
    out << '\n';
  }
}

game::EmpiricalGame read_payoff_matrix_csv(std::istream& in, std::vector<std::string>* labels) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("line 1", "empty payoff matrix");
  const auto header = split_csv(line);
  if (header.size() < 2 || header[0] != "strategy") throw ConfigError("line 1", "expected header 'strategy,<labels>'");
  const std::size_t s = header.size() - 1;
  std::vector<std::vector<std::array<stats::Summary, 2>>> cells(s);
  std::vector<std::string> names(header.begin() + 1, header.end());
  for (std::size_t a = 0; a < s; ++a) {
    const std::string where = "line " + std::to_string(a + 2);
    if (!std::getline(in, line)) throw ConfigError(where, "missing row");
    const auto f = split_csv(line);
    if (f.size() != s + 1) throw ConfigError(where, "expected " + std::to_string(s + 1) + " fields");
    for (std::size_t b = 0; b < s; ++b) {
      const std::string w = where + " column " + std::to_string(b + 2);
      const auto bar = f[b + 1].find('|');
      if (bar == std::string::npos) throw ConfigError(w, "expected player1|player2 statistics");
      cells[a].push_back({parse_stats(f[b + 1].substr(0, bar), w), parse_stats(f[b + 1].substr(bar + 1), w)});
    }
  }
  auto same = [](const stats::Summary& x, const stats::Summary& y) {
    return x.n == y.n && x.mean == y.mean && x.variance == y.variance;
  };
  bool symmetric = true;
  for (std::size_t a = 0; a < s && symmetric; ++a)
    for (std::size_t b = 0; b < s; ++b)
      if (!same(cells[a][b][0], cells[b][a][1])) {
        symmetric = false;
        break;
      }
  game::EmpiricalGame g(s, symmetric);
  for (auto p : g.stored_profiles()) g.set_summaries(p, cells[p.first][p.second]);
  if (labels) *labels = std::move(names);
  return g;
}

json report_to_json(const gsa::GsaIterationReport& r) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["iteration"] = r.iteration;
  j["phase"] = r.phase;
  j["factors"] = factors_json(r.factors);
  j["strategies"] = r.strategies;
  j["labels"] = r.labels;
  json fixed = json::object();
  for (std::size_t i = 0; i < strategy::kDetailedFactors; ++i)
    fixed[std::string(strategy::name(static_cast<strategy::Factor>(i)))] =
        json::array({r.fixed.values[i].lo, r.fixed.values[i].hi});
  j["fixed"] = fixed;
  j["profiles"] = r.profiles;
  j["replications"] = r.replications;
  j["equilibria"] = profiles_json(r.equilibria);
  j["epsilon_equilibria"] = profiles_json(r.epsilon_equilibria);
  j["solution"] = r.solution ? pair_json(*r.solution) : json(nullptr);
  j["selection"] = r.selection;
  j["solution_regret"] = real(r.solution_regret);
  j["ci"] = {{"initial", estimate_json(r.initial_estimate)}, {"extended", estimate_json(r.extended_estimate)}};
  json nt = json::array();
  for (const auto& t : r.neighbor_tests)
    nt.push_back({{"profile", pair_json(t.profile)},
                  {"mean", json::array({real(t.mean[0]), real(t.mean[1])})},
                  {"p_value", json::array({real(t.p_value[0]), real(t.p_value[1])})}});
  j["neighbor_tests"] = nt;
  json tc = json::array();
  for (const auto& t : r.tolerance_curve)
    tc.push_back({{"tolerance", real(t.tolerance)},
                  {"symmetric_share", real(t.symmetric_share)},
                  {"other_share", real(t.other_share)}});
  j["tolerance_curve"] = tc;
  json main = json::array();
  for (const auto& e : r.doe.main)
    main.push_back({{"factor", e.factor < r.factors.size() ? std::string(strategy::name(r.factors[e.factor].factor))
                                                           : std::to_string(e.factor)},
                    {"index", e.factor},
                    {"effect", real(e.effect)},
                    {"std_error", real(e.std_error)},
                    {"df", real(e.df)},
                    {"t", real(e.t)},
                    {"p_value", real(e.p_value)},
                    {"significant", e.significant}});
  json inter = json::array();
  for (const auto& e : r.doe.interactions) inter.push_back({{"a", e.a}, {"b", e.b}, {"effect", real(e.effect)}});
  j["doe"] = {{"main", main}, {"interactions", inter}};
  j["next_plan"] = {{"phase", r.next_plan.phase},
                    {"terminal", r.next_plan.terminal},
                    {"factors", factors_json(r.next_plan.active)}};
  j["stability"] = {{"AS", real(r.stability.asymptotic)},
                    {"MS", real(r.stability.marginal)},
                    {"Instable", real(r.stability.instable)},
                    {"tolerance", real(r.stability_tolerance)}};
  j["solution_samples"] = json::array({reals(r.solution_samples[0]), reals(r.solution_samples[1])});
  j["truncated"] = r.truncated;
  j["truncation_reason"] = r.truncation_reason;
  return j;
}

gsa::GsaIterationReport report_from_json(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion)
      throw ConfigError("schema_version", "unsupported report version");
    gsa::GsaIterationReport r;
    r.iteration = j.at("iteration").get<std::size_t>();
    r.phase = j.at("phase").get<int>();
    r.factors = factors_in(j.at("factors"));
    r.strategies = j.at("strategies").get<std::vector<strategy::Strategy>>();
    r.labels = j.at("labels").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < strategy::kDetailedFactors; ++i) {
      const auto& v = j.at("fixed").at(std::string(strategy::name(static_cast<strategy::Factor>(i))));
      r.fixed.values[i] = {v.at(0).get<double>(), v.at(1).get<double>()};
    }
    r.profiles = j.at("profiles").get<std::size_t>();
    r.replications = j.at("replications").get<std::size_t>();
    r.equilibria = profiles_in(j.at("equilibria"));
    r.epsilon_equilibria = profiles_in(j.at("epsilon_equilibria"));
    if (!j.at("solution").is_null()) r.solution = pair_in(j.at("solution"));
    r.selection = j.at("selection").get<std::string>();
    r.solution_regret = real_in(j.at("solution_regret"));
    r.initial_estimate = estimate_in(j.at("ci").at("initial"));
    r.extended_estimate = estimate_in(j.at("ci").at("extended"));
    for (const auto& e : j.at("neighbor_tests")) {
      gsa::NeighborTest t;
      t.profile = pair_in(e.at("profile"));
      for (std::size_t p = 0; p < 2; ++p) {
        t.mean[p] = real_in(e.at("mean").at(p));
        t.p_value[p] = real_in(e.at("p_value").at(p));
      }
      r.neighbor_tests.push_back(t);
    }
    for (const auto& e : j.at("tolerance_curve"))
      r.tolerance_curve.push_back(
          {real_in(e.at("tolerance")), real_in(e.at("symmetric_share")), real_in(e.at("other_share"))});
    for (const auto& e : j.at("doe").at("main")) {
      doe::Effect d;
      d.factor = e.at("index").get<std::size_t>();
      d.effect = real_in(e.at("effect"));
      d.std_error = real_in(e.at("std_error"));
      d.df = real_in(e.at("df"));
      d.t = real_in(e.at("t"));
      d.p_value = real_in(e.at("p_value"));
      d.significant = e.at("significant").get<bool>();
      r.doe.main.push_back(d);
    }
    for (const auto& e : j.at("doe").at("interactions"))
      r.doe.interactions.push_back({e.at("a").get<std::size_t>(), e.at("b").get<std::size_t>(), real_in(e.at("effect"))});
    r.next_plan.phase = j.at("next_plan").at("phase").get<int>();
    r.next_plan.terminal = j.at("next_plan").at("terminal").get<bool>();
    r.next_plan.active = factors_in(j.at("next_plan").at("factors"));
    r.stability.asymptotic = real_in(j.at("stability").at("AS"));
    r.stability.marginal = real_in(j.at("stability").at("MS"));
    r.stability.instable = real_in(j.at("stability").at("Instable"));
    r.stability_tolerance = real_in(j.at("stability").at("tolerance"));
    for (std::size_t p = 0; p < 2; ++p) r.solution_samples[p] = reals_in(j.at("solution_samples").at(p));
    r.truncated = j.at("truncated").get<bool>();
    r.truncation_reason = j.at("truncation_reason").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw ConfigError("report", e.what());
  }
}

json game_to_json(const game::EmpiricalGame& g) {
  json cells = json::array();
  for (auto p : g.stored_profiles()) {
    if (!g.has(p)) continue;
    const auto s = g.samples(p);
    cells.push_back({{"profile", pair_json(p)}, {"ids", s.ids}, {"values", json::array({s.values[0], s.values[1]})}});
  }
  return {{"strategies", g.strategies()}, {"symmetric", g.symmetric()}, {"trim", g.trim()}, {"cells", cells}};
}

game::EmpiricalGame game_from_json(const json& j) {
  try {
    game::EmpiricalGame g(j.at("strategies").get<std::size_t>(), j.at("symmetric").get<bool>());
    for (const auto& c : j.at("cells")) {
      game::PayoffSamples s;
      s.ids = c.at("ids").get<std::vector<std::uint64_t>>();
      s.values[0] = c.at("values").at(0).get<std::vector<double>>();
      s.values[1] = c.at("values").at(1).get<std::vector<double>>();
      if (s.values[0].size() != s.ids.size() || s.values[1].size() != s.ids.size())
        throw ConfigError("cells", "sample arrays differ in length");
      g.set(pair_in(c.at("profile")), std::move(s));
    }
    g.set_trim(j.at("trim").get<std::size_t>());
    return g;
  } catch (const json::exception& e) {
    throw ConfigError("game", e.what());
  }
}

json checkpoint_to_json(const gsa::Checkpoint& c) {
  return {{"schema_version", kReportSchemaVersion},
          {"report", report_to_json(c.report)},
          {"game", game_to_json(c.game)},
          {"replications_used", c.replications_used}};
}

gsa::Checkpoint checkpoint_from_json(const json& j) {
  try {
    gsa::Checkpoint c;
    c.report = report_from_json(j.at("report"));
    c.game = game_from_json(j.at("game"));
    c.replications_used = j.at("replications_used").get<std::size_t>();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError("checkpoint", e.what());
  }
}

json cross_tests_to_json(const std::vector<gsa::CrossIterationTest>& tests) {
  json a = json::array();
  for (const auto& t : tests)
    a.push_back({{"from", t.from}, {"to", t.to}, {"p_value", json::array({real(t.p_value[0]), real(t.p_value[1])})}});
  return a;
}

void write_plot_data(const std::filesystem::path& dir, const std::vector<gsa::GsaIterationReport>& reports,
                     const std::vector<gsa::CrossIterationTest>& cross) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw Error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("fig7_equilibrium_share.csv");
    f << "iteration,tolerance,symmetric_share,other_share,total_share\n";
    for (const auto& r : reports)
      for (const auto& t : r.tolerance_curve)
        f << r.iteration << ',' << fmt(t.tolerance) << ',' << fmt(t.symmetric_share) << ',' << fmt(t.other_share)
          << ',' << fmt(t.symmetric_share + t.other_share) << '\n';
  }
  {
    auto f = open("fig8_neighbor_pvalues.csv");
    f << "iteration,rank,p1_strategy,p2_strategy,player,mean,p_value\n";
    for (const auto& r : reports)
      for (std::size_t k = 0; k < r.neighbor_tests.size(); ++k)
        for (std::size_t p = 0; p < 2; ++p) {
          const auto& t = r.neighbor_tests[k];
          f << r.iteration << ',' << k + 1 << ',' << t.profile.first << ',' << t.profile.second << ',' << p + 1 << ','
            << fmt(t.mean[p]) << ',' << fmt(t.p_value[p]) << '\n';
        }
  }
  {
    auto f = open("fig9_cross_pvalues.csv");
    f << "from,to,player,p_value\n";
    for (const auto& t : cross)
      for (std::size_t p = 0; p < 2; ++p) f << t.from << ',' << t.to << ',' << p + 1 << ',' << fmt(t.p_value[p]) << '\n';
  }
  {
    auto f = open("table8_ci.csv");
    f << "iteration,solution,stage,n,player,mean,half_width\n";
    for (const auto& r : reports) {
      if (!r.solution) continue;
      const std::string sol = std::to_string(r.solution->first) + ";" + std::to_string(r.solution->second);
      for (const auto* e : {&r.initial_estimate, &r.extended_estimate})
        for (std::size_t p = 0; p < 2; ++p)
          f << r.iteration << ',' << sol << ',' << (e == &r.initial_estimate ? "initial" : "extended") << ',' << e->n
            << ',' << p + 1 << ',' << fmt(e->mean[p]) << ',' << fmt(e->half_width[p]) << '\n';
    }
  }
  {
    auto f = open("table9_stability.csv");
    f << "iteration,AS,MS,Instable\n";
    for (const auto& r : reports)
      f << r.iteration << ',' << fmt(r.stability.asymptotic) << ',' << fmt(r.stability.marginal) << ','
        << fmt(r.stability.instable) << '\n';
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("", "cannot open " + path.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError("", path.string() + ": " + e.what());
  }
}

}  // namespace duopoly::io
