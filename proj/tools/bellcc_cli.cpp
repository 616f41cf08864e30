// bellcc: command-line front end.
//
// Exit codes: 0 ok, 1 runtime failure, 2 bad arguments or input file,
// 3 capacity exceeded, 4 simulation self-check tripped (|z| >= 6).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bellcc/ccp.hpp"
#include "bellcc/continuum.hpp"
#include "bellcc/errors.hpp"
#include "bellcc/inequalities.hpp"
#include "bellcc/io.hpp"
#include "bellcc/montecarlo.hpp"

namespace {

using namespace bellcc;
using io::Json;

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string command;
  std::string family;
  std::string wwzb_index;
  std::string g_file;
  std::string sign_file;
  int parties = 3;
  double visibility = 1.0;
  std::uint64_t rounds = 100000;
  std::optional<std::uint64_t> seed;
  int grid = 64;
  std::string output;
  std::string format = "json";
  std::string protocol = "quantum";
  std::string settings_mode = "auto";
  std::string trace_file;
  int lhv_cap = ineq::kDefaultLhvCap;
  int restarts = 32;
  std::uint64_t optimizer_seed = 0x5eed;
  unsigned threads = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SelfCheckFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json provenance(const RunConfig& c) {
  Json flags;
  if (!c.family.empty()) flags["family"] = c.family;
  if (!c.wwzb_index.empty()) flags["wwzb_index"] = c.wwzb_index;
  if (!c.g_file.empty()) flags["g_file"] = c.g_file;
  if (!c.sign_file.empty()) flags["sign_file"] = c.sign_file;
  flags["n"] = c.parties;
  if (c.command == "success" || c.command == "simulate" || c.command == "continuum") {
    flags["visibility"] = c.visibility;
  }
  if (c.command == "simulate") {
    flags["rounds"] = c.rounds;
    flags["protocol"] = c.protocol;
  }
  if (c.command == "success" || c.command == "simulate" || c.command == "enumerate") {
    flags["settings"] = c.settings_mode;
    flags["restarts"] = c.restarts;
    flags["optimizer_seed"] = c.optimizer_seed;
  }
  if (c.command == "continuum") flags["grid"] = c.grid;
  if (c.command != "continuum") flags["lhv_cap"] = c.lhv_cap;
  Json p;
  p["tool"] = "bellcc";
  p["version"] = kVersion;
  p["command"] = c.command;
  p["flags"] = flags;
  p["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  return p;
}

std::string provenance_comment(const RunConfig& c) {
  return "# " + provenance(c).dump() + "\n";
}

std::uint64_t parse_index(const std::string& text) {
  try {
    std::size_t used = 0;
    const auto value = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw UsageError("--wwzb-index: cannot parse '" + text + "' as an integer");
  }
}

ineq::GTable load_g(const RunConfig& c) {
  const int sources = !c.family.empty() + !c.g_file.empty() + !c.sign_file.empty();
  if (sources != 1) {
    throw UsageError("exactly one of --family, --g-file, --sign-file is required");
  }
  if (!c.g_file.empty()) return io::load_g_table(c.g_file);
  if (!c.sign_file.empty()) return ineq::wwzb_g(io::load_sign_function(c.sign_file));
  if (c.family == "mermin") return ineq::mermin_g(c.parties);
  if (c.family == "ardehali") return ineq::ardehali_g(c.parties);
  if (c.wwzb_index.empty()) throw UsageError("--family wwzb needs --wwzb-index");
  const auto mask = parse_index(c.wwzb_index);
  const auto size = std::size_t{1} << c.parties;
  if (c.parties > 6 || (size < 64 && (mask >> size) != 0)) {
    throw UsageError("--wwzb-index out of range for n = " + std::to_string(c.parties));
  }
  return ineq::wwzb_g(ineq::SignFunction::from_mask(c.parties, mask));
}

qsim::MeasurementSettings choose_settings(const RunConfig& c, const ineq::GTable& g,
                                          double* optimized_value) {
  const int n = g.parties();
  const bool xy = c.settings_mode == "xy" || (c.settings_mode == "auto" && c.family == "mermin");
  if (xy) {
    return qsim::MeasurementSettings::uniform(n, qsim::BlochObservable::pauli_x(),
                                              qsim::BlochObservable::pauli_y());
  }
  ineq::OptimizeOptions options;
  options.restarts = c.restarts;
  options.seed = c.optimizer_seed;
  const auto result = ineq::optimize_settings(qsim::ghz(n), g, options);
  if (optimized_value) *optimized_value = result.value;
  return result.settings;
}

void write_output(const RunConfig& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw UsageError("cannot write " + c.output);
  out << text;
}

std::string strategy_text(const ineq::DeterministicStrategy& s) {
  std::string out;
  for (const auto& [a0, a1] : s.responses()) {
    if (!out.empty()) out += ' ';
    out += (a0 > 0 ? '+' : '-');
    out += (a1 > 0 ? '+' : '-');
  }
  return out;
}

std::string csv(const RunConfig& c, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  std::string out = provenance_comment(c);
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::string emit(const RunConfig& c, const Json& result, const std::vector<std::string>& header,
                 const std::vector<std::string>& row) {
  if (c.format == "csv") return csv(c, header, {row});
  Json doc;
  doc["provenance"] = provenance(c);
  doc["result"] = result;
  return doc.dump(2) + "\n";
}

std::string fmt(double v) { return io::format_double(v); }

std::string cmd_bound(const RunConfig& c) {
  const auto g = load_g(c);
  const auto lhv = ineq::lhv_bound(g, c.lhv_cap, c.threads);
  const double classical = 0.5 * (1.0 + lhv.bound / g.total_weight());
  Json r;
  r["n"] = g.parties();
  r["bound"] = lhv.bound;
  r["argmax"] = io::strategy_json(lhv.argmax);
  r["total_weight"] = g.total_weight();
  r["classical_max"] = classical;
  return emit(c, r, {"n", "bound", "argmax", "total_weight", "classical_max"},
              {std::to_string(g.parties()), fmt(lhv.bound), strategy_text(lhv.argmax),
               fmt(g.total_weight()), fmt(classical)});
}

std::string cmd_success(const RunConfig& c) {
  const auto g = load_g(c);
  const auto settings = choose_settings(c, g, nullptr);
  const auto tensor = qsim::correlation_tensor(qsim::ghz(g.parties()), settings, c.visibility);
  const auto inequality = ineq::BellInequality{g, ineq::lhv_bound(g, c.lhv_cap, c.threads).bound};
  const auto report = ccp::analyze(inequality, tensor);
  return emit(c, io::to_json(report),
              {"classical_max", "quantum", "advantage", "bell_lhs", "bound"},
              {fmt(report.classical_max), fmt(report.quantum), report.advantage ? "true" : "false",
               fmt(report.bell_lhs), fmt(report.bound)});
}

std::string cmd_simulate(const RunConfig& c) {
  if (!c.seed) throw UsageError("simulate requires --seed");
  const auto g = load_g(c);
  const auto problem = ccp::build_problem(g);

  std::ofstream trace_out;
  mc::SimOptions options;
  options.rounds = c.rounds;
  options.seed = *c.seed;
  options.threads = c.threads;
  if (!c.trace_file.empty()) {
    trace_out.open(c.trace_file);
    if (!trace_out) throw UsageError("cannot write " + c.trace_file);
    options.trace = [&](const mc::RoundTrace& t) { trace_out << mc::format_trace(t, g.parties()) << '\n'; };
  }

  mc::SimReport report;
  if (c.protocol == "classical") {
    const auto lhv = ineq::lhv_bound(g, c.lhv_cap, c.threads);
    report = mc::run_classical(problem, ineq::StrategyEnsemble(lhv.argmax), options);
  } else {
    const auto settings = choose_settings(c, g, nullptr);
    report = mc::run_quantum(problem, qsim::ghz(g.parties()), settings, c.visibility, options);
  }
  const auto text = emit(c, io::to_json(report),
                         {"rounds", "successes", "empirical_rate", "analytic_rate",
                          "standard_error", "z_score"},
                         {std::to_string(report.rounds), std::to_string(report.successes),
                          fmt(report.empirical_rate), fmt(report.analytic_rate),
                          fmt(report.standard_error), fmt(report.z_score)});
  write_output(c, text);
  if (!(std::abs(report.z_score) < 6.0)) {
    throw SelfCheckFailure("empirical rate deviates from the analytic rate by |z| = " +
                           fmt(std::abs(report.z_score)));
  }
  return {};
}

std::string cmd_enumerate(const RunConfig& c) {
  const int n = c.parties;
  ineq::OptimizeOptions options;
  options.restarts = c.restarts;
  options.seed = c.optimizer_seed;
  const auto state = qsim::ghz(n);
  std::vector<std::vector<std::string>> rows;
  Json members = Json::array();
  ineq::for_each_wwzb(n, [&](const ineq::WwzbMember& m) {
    const double bound = ineq::lhv_bound(m.g, c.lhv_cap, c.threads).bound;
    const auto opt = ineq::optimize_settings(state, m.g, options);
    const double total = m.g.total_weight();
    const double classical = 0.5 * (1.0 + bound / total);
    const double quantum = 0.5 * (1.0 + opt.value / total);
    const auto verdict = ineq::violated(ineq::BellInequality{m.g, bound},
                                        qsim::correlation_tensor(state, opt.settings));
    rows.push_back({m.sign.to_hex(), m.factorable ? "true" : "false", fmt(bound), fmt(opt.value),
                    fmt(total), fmt(classical), fmt(quantum), fmt(quantum - classical),
                    verdict.violated ? "true" : "false"});
    Json j;
    j["mask"] = m.sign.to_hex();
    j["factorable"] = m.factorable;
    j["bound"] = bound;
    j["quantum_value"] = opt.value;
    j["total_weight"] = total;
    j["classical_max"] = classical;
    j["quantum_success"] = quantum;
    j["success_gap"] = quantum - classical;
    j["violated"] = verdict.violated;
    members.push_back(j);
  });
  const std::vector<std::string> header{"mask",          "factorable",      "bound",
                                        "quantum_value", "total_weight",    "classical_max",
                                        "quantum_success", "success_gap",   "violated"};
  if (c.format == "csv") return csv(c, header, rows);
  Json doc;
  doc["provenance"] = provenance(c);
  doc["result"] = members;
  return doc.dump(2) + "\n";
}

std::string cmd_continuum(const RunConfig& c) {
  continuum::ContinuumScenario s;
  s.parties = c.parties;
  s.grid_points = c.grid;
  s.visibility = c.visibility;
  const auto r = continuum::continuum_success(s);
  return emit(c, io::to_json(r), {"n", "m", "lhs", "bound", "W", "classical_max", "quantum", "advantage"},
              {std::to_string(r.parties), std::to_string(r.grid_points), fmt(r.lhs), fmt(r.bound),
               fmt(r.weight), fmt(r.classical_max), fmt(r.quantum), r.advantage ? "true" : "false"});
}

void add_g_source(CLI::App* sub, RunConfig& c) {
  sub->add_option("--family", c.family, "Weight family")
      ->check(CLI::IsMember({"mermin", "ardehali", "wwzb"}));
  sub->add_option("--wwzb-index", c.wwzb_index, "Sign-function mask for --family wwzb (e.g. 0x6)");
  sub->add_option("--g-file", c.g_file, "JSON weight table {\"n\", \"values\"}");
  sub->add_option("--sign-file", c.sign_file, "JSON sign function {\"n\", \"mask\"}");
  sub->add_option("--n", c.parties, "Party count")->check(CLI::Range(1, 20));
  sub->add_option("--lhv-cap", c.lhv_cap, "Largest n for exhaustive LHV search")
      ->check(CLI::Range(1, 16));
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--output,-o", c.output, "Write the report here instead of stdout");
  sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--threads", c.threads, "Worker threads (default: BELLCC_THREADS or 1)");
}

void add_optimizer(CLI::App* sub, RunConfig& c) {
  sub->add_option("--settings", c.settings_mode,
                  "Measurement settings: auto (X/Y for mermin, optimized otherwise), xy, optimized")
      ->check(CLI::IsMember({"auto", "xy", "optimized"}));
  sub->add_option("--restarts", c.restarts, "Optimizer restarts")->check(CLI::Range(1, 100000));
  sub->add_option("--optimizer-seed", c.optimizer_seed, "Optimizer seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell-inequality communication-complexity toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  RunConfig c;

  auto* bound = app.add_subcommand("bound", "Exact classical (LHV) bound by enumeration");
  add_g_source(bound, c);
  add_common(bound, c);

  auto* success = app.add_subcommand("success", "Classical vs quantum success with GHZ");
  add_g_source(success, c);
  add_common(success, c);
  add_optimizer(success, c);
  success->add_option("--visibility", c.visibility, "GHZ visibility")->check(CLI::Range(0.0, 1.0));

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of the protocol");
  add_g_source(simulate, c);
  add_common(simulate, c);
  add_optimizer(simulate, c);
  simulate->add_option("--visibility", c.visibility, "GHZ visibility")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--rounds", c.rounds, "Rounds")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  simulate->add_option("--seed", c.seed, "Master seed (required)");
  simulate->add_option("--protocol", c.protocol, "quantum or classical (LHV argmax strategy)")
      ->check(CLI::IsMember({"quantum", "classical"}));
  simulate->add_option("--trace", c.trace_file, "Write one line per round to this file");

  auto* enumerate = app.add_subcommand("enumerate", "All 2^(2^n) sign-function inequalities");
  enumerate->add_option("--n", c.parties, "Party count (<= 4)")->check(CLI::Range(1, 20));
  enumerate->add_option("--lhv-cap", c.lhv_cap, "Largest n for exhaustive LHV search")
      ->check(CLI::Range(1, 16));
  add_common(enumerate, c);
  add_optimizer(enumerate, c);

  auto* cont = app.add_subcommand("continuum", "Continuous-settings functional inequality");
  cont->add_option("--n", c.parties, "Party count (<= 4)")->check(CLI::Range(1, 20));
  cont->add_option("--grid", c.grid, "Grid points per dimension (even, >= 8)");
  cont->add_option("--visibility", c.visibility, "GHZ visibility")->check(CLI::Range(0.0, 1.0));
  add_common(cont, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    std::string text;
    if (c.command == "bound") text = cmd_bound(c);
    else if (c.command == "success") text = cmd_success(c);
    else if (c.command == "simulate") text = cmd_simulate(c);
    else if (c.command == "enumerate") text = cmd_enumerate(c);
    else text = cmd_continuum(c);
    if (!text.empty()) write_output(c, text);
    return 0;
  } catch (const SelfCheckFailure& e) {
    std::cerr << "self-check failed: " << e.what() << "\n";
    return 4;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
