#include "hbq_cli/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hbq/diagnostics.hpp"
#include "hbq/errors.hpp"
#include "hbq/experiments.hpp"
#include "hbq/waves.hpp"
#include "hbq_cli/checks.hpp"
#include "hbq_cli/config.hpp"
#include "hbq_cli/io.hpp"

namespace hbq::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Raised for runs that fail numerically when no blow-up was expected.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::optional<std::string> out_dir;
  std::optional<std::string> config;
  std::optional<int> N, M, p, sign, jobs;
  std::optional<double> L, T, eta1, eta2, threshold;
  bool quiet = false;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--out-dir", o.out_dir, "Output directory (default: $HBQ_OUT_DIR)");
  cmd->add_option("--config", o.config, "JSON config overlaid on the preset")->check(CLI::ExistingFile);
  cmd->add_option("--N", o.N, "Grid size");
  cmd->add_option("--M", o.M, "Number of time steps");
  cmd->add_option("--T", o.T, "Final time");
  cmd->add_option("--L", o.L, "Domain half-length");
  cmd->add_option("--eta1", o.eta1, "Coefficient of u_xxtt");
  cmd->add_option("--eta2", o.eta2, "Coefficient of u_xxxxtt");
  cmd->add_option("--p", o.p, "Nonlinearity power");
  cmd->add_option("--sign", o.sign, "Nonlinearity sign (+1 or -1)");
  cmd->add_option("--threshold", o.threshold, "Blow-up threshold on max|u|");
  cmd->add_option("--jobs", o.jobs, "Parallel simulations");
  cmd->add_flag("--quiet", o.quiet, "Do not echo tables to stdout");
}

fs::path resolve_out_dir(const Overrides& o) {
  if (o.out_dir) return *o.out_dir;
  if (const char* env = std::getenv("HBQ_OUT_DIR"); env && *env) return env;
  throw InvalidArgument("no output path: pass --out-dir or set HBQ_OUT_DIR");
}

ExperimentConfig apply_overrides(ExperimentConfig cfg, const Overrides& o) {
  if (o.config) {
    const json j = load_json_file(*o.config);
    if (j.contains("scenario") && j.at("scenario") != std::string(to_string(cfg.scenario)))
      throw InvalidArgument("config scenario does not match the subcommand");
    cfg = apply_config(cfg, j);
  }
  if (o.N) cfg.N = *o.N;
  if (o.M) cfg.M = *o.M;
  if (o.T) cfg.T = *o.T;
  if (o.L) cfg.L = *o.L;
  if (o.eta1) cfg.params.eta1 = *o.eta1;
  if (o.eta2) cfg.params.eta2 = *o.eta2;
  if (o.p) cfg.params.p = *o.p;
  if (o.sign) cfg.params.sign = *o.sign;
  if (o.threshold) cfg.threshold = *o.threshold;
  if (o.jobs) cfg.jobs = *o.jobs;
  return cfg;
}

void echo(const ResultSet& rs, std::ostream& os) {
  for (const auto& t : rs.tables) {
    if (t.rows.size() > 40) {
      os << "# " << t.name << ": " << t.rows.size() << " rows\n";
      continue;
    }
    os << "# " << t.name << '\n';
    for (const auto& c : t.columns) os << std::setw(14) << c;
    os << '\n';
    for (const auto& row : t.rows) {
      for (double x : row) os << std::setw(14) << std::setprecision(6) << x;
      os << '\n';
    }
  }
}

void finish(const ResultSet& rs, const ExperimentConfig& cfg, const Overrides& o, double seconds) {
  const RunManifest m = write_resultset(rs, resolve_out_dir(o), config_to_json(cfg), seconds);
  if (!o.quiet) echo(rs, std::cout);
  for (const auto& p : m.outputs) std::cout << "wrote " << p.string() << '\n';
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void run_preset(Scenario sc, const Overrides& o) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig cfg = apply_overrides(default_config(sc), o);
  cfg.validate();
  resolve_out_dir(o);  // fail before computing
  const ResultSet rs = run_experiment(cfg);
  finish(rs, cfg, o, elapsed(start));
}

struct SimulateOptions {
  std::string init = "solitary";
  double x0 = 0.0;
  double amplitude = 0.9;
  int stride = 100;
  double guard = 1e6;
};

State initial_state(const SimulateOptions& s, const GridSpec& grid, HbqParams& params,
                    std::optional<SolitaryWave>& oracle) {
  if (s.init == "zero") {
    State z;
    z.u.assign(static_cast<std::size_t>(grid.size()), 0.0);
    z.v = z.u;
    return z;
  }
  if (s.init == "solitary") {
    oracle = solitary_params(params).centered_at(s.x0);
    return solitary_initial_state(*oracle, grid);
  }
  if (s.init == "ibq") return ibq_initial_state(s.amplitude, grid);
  if (s.init == "collision") return collision_initial_state(params, grid, -40.0, 40.0);
  if (s.init == "blowup-quadratic" || s.init == "blowup-cubic") {
    const BlowupData d =
        blowup_data(s.init == "blowup-quadratic" ? BlowupCase::quadratic : BlowupCase::cubic);
    return blowup_initial_state(d, grid);
  }
  throw InvalidArgument("unknown --init '" + s.init + "'");
}

void run_simulate(const SimulateOptions& s, const Overrides& o) {
  const auto start = std::chrono::steady_clock::now();
  const bool blowup_init = s.init.rfind("blowup-", 0) == 0;

  ExperimentConfig cfg = default_config(blowup_init ? Scenario::blowup_refinement
                                                    : Scenario::time_convergence);
  if (s.init == "blowup-cubic") {
    cfg.params = blowup_data(BlowupCase::cubic).params;
    cfg.T = 0.4;
  }
  if (!blowup_init) cfg.M = 1000;
  cfg = apply_overrides(cfg, o);
  cfg.validate();
  resolve_out_dir(o);
  if (s.stride < 1) throw InvalidArgument("--stride must be at least 1");

  const GridSpec grid = make_grid(cfg.L, cfg.N);
  HbqParams params = cfg.params;
  std::optional<SolitaryWave> oracle;
  const State init = initial_state(s, grid, params, oracle);

  EvolveOptions opts;
  opts.sample_stride = s.stride;
  opts.blowup_guard = s.guard;
  const Trajectory traj = evolve(init, grid, params, TimeGrid(cfg.T, cfg.M), opts);
  if (traj.blew_up() && !blowup_init)
    throw NumericalFailure(std::string("simulation terminated early: ") + to_string(traj.termination) +
                           " at t=" + std::to_string(traj.final.t));

  ResultSet rs;
  rs.scenario = "simulate";
  rs.metadata = {{"init", s.init}, {"termination", to_string(traj.termination)}};
  Table diag{"simulate",
             {"t", "linf_u", "linf_error", "amplitude", "I1", "I2", "I3", "blowup_flag"},
             {}};
  Table snaps{"snapshots", {"t", "x", "u", "v"}, {}};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto x = grid.nodes();
  for (const State& st : traj.samples) {
    RealField exact;
    if (oracle) exact = solitary_state(*oracle, grid, st.t).u;
    const DiagnosticsRecord r = make_record(st, grid, params, exact, cfg.threshold);
    diag.add_row({r.t, r.linf_u, r.linf_error.value_or(nan), r.amplitude, r.I1, r.I2.value_or(nan),
                  r.I3.value_or(nan), r.blowup_flag ? 1.0 : 0.0});
    for (std::size_t j = 0; j < x.size(); ++j) snaps.add_row({st.t, x[j], st.u[j], st.v[j]});
  }
  rs.tables = {std::move(diag), std::move(snaps)};

  json echo_cfg = config_to_json(cfg);
  echo_cfg["init"] = s.init;
  echo_cfg["stride"] = s.stride;
  const RunManifest m = write_resultset(rs, resolve_out_dir(o), echo_cfg, elapsed(start));
  if (!o.quiet) echo(ResultSet{rs.scenario, {rs.tables.front()}, {}}, std::cout);
  for (const auto& p : m.outputs) std::cout << "wrote " << p.string() << '\n';
}

int run_check(const Overrides& o) {
  const auto results = run_invariant_checks();
  bool all = true;
  Table t{"check", {"index", "passed", "value", "tolerance"}, {}};
  int i = 0;
  for (const auto& r : results) {
    all = all && r.passed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  value=" << std::setprecision(6)
              << r.value << "  tol=" << r.tolerance;
    if (!r.detail.empty()) std::cout << "  (" << r.detail << ')';
    std::cout << '\n';
    t.add_row({double(i++), r.passed ? 1.0 : 0.0, r.value, r.tolerance});
  }
  if (o.out_dir || std::getenv("HBQ_OUT_DIR")) {
    ResultSet rs{"check", {t}, {}};
    for (std::size_t k = 0; k < results.size(); ++k)
      rs.metadata.emplace_back("check_" + std::to_string(k), results[k].name);
    write_resultset(rs, resolve_out_dir(o), json::object());
  }
  std::cout << (all ? "all invariant checks passed\n" : "invariant checks FAILED\n");
  return all ? kOk : kNumericalFailure;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral solver for the higher-order Boussinesq equation"};
  app.require_subcommand(1);

  Overrides overrides;
  SimulateOptions sim;

  auto* simulate = app.add_subcommand("simulate", "Single run: snapshots and diagnostics");
  add_overrides(simulate, overrides);
  simulate->add_option("--init", sim.init, "zero|solitary|ibq|collision|blowup-quadratic|blowup-cubic")
      ->check(CLI::IsMember({"zero", "solitary", "ibq", "collision", "blowup-quadratic", "blowup-cubic"}));
  simulate->add_option("--x0", sim.x0, "Solitary wave center");
  simulate->add_option("--amplitude", sim.amplitude, "IBq initial amplitude");
  simulate->add_option("--stride", sim.stride, "Snapshot stride in steps");
  simulate->add_option("--guard", sim.guard, "Stop when max|u| exceeds this");

  const std::map<std::string, std::pair<Scenario, std::string>> presets = {
      {"table1", {Scenario::time_convergence, "Temporal convergence (M ladder)"}},
      {"table2", {Scenario::space_convergence, "Spatial convergence (N ladder)"}},
      {"table3", {Scenario::ibq_limit, "Final amplitudes versus eta2"}},
      {"fig1", {Scenario::nonlinearity_sweep, "Errors versus N for p = 2..5"}},
      {"fig2", {Scenario::ibq_limit, "HBq profiles against the IBq solitary wave"}},
      {"fig3", {Scenario::collision, "Head-on collision of two solitary waves"}},
      {"fig4", {Scenario::blowup_refinement, "Blow-up under mesh refinement"}},
      {"fig5", {Scenario::blowup_profile, "Blow-up profiles near the blow-up time"}},
      {"fig6", {Scenario::blowup_eta2_sweep, "Blow-up time versus eta2"}},
      {"fig7", {Scenario::blowup_p_sweep, "Blow-up time versus p"}},
  };
  std::map<std::string, CLI::App*> preset_cmds;
  for (const auto& [name, info] : presets) {
    auto* cmd = app.add_subcommand(name, info.second);
    add_overrides(cmd, overrides);
    preset_cmds[name] = cmd;
  }

  auto* sweep = app.add_subcommand("sweep", "Config-driven run of any scenario");
  add_overrides(sweep, overrides);
  sweep->get_option("--config")->required();

  auto* check = app.add_subcommand("check", "Run the invariant suite");
  check->add_option("--out-dir", overrides.out_dir, "Also write check.csv here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (simulate->parsed()) {
      run_simulate(sim, overrides);
      return kOk;
    }
    if (check->parsed()) return run_check(overrides);
    if (sweep->parsed()) {
      const ExperimentConfig base = config_from_json(load_json_file(*overrides.config));
      Overrides rest = overrides;
      rest.config.reset();
      const auto start = std::chrono::steady_clock::now();
      ExperimentConfig cfg = apply_overrides(base, rest);
      cfg.validate();
      resolve_out_dir(rest);
      finish(run_experiment(cfg), cfg, rest, elapsed(start));
      return kOk;
    }
    for (const auto& [name, cmd] : preset_cmds) {
      if (cmd->parsed()) {
        run_preset(presets.at(name).first, overrides);
        return kOk;
      }
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NoSolitaryWave& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kConfigError;
}

}  // namespace hbq::cli
