#include "hbq/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "hbq/diagnostics.hpp"
#include "hbq/errors.hpp"
#include "hbq/waves.hpp"

namespace hbq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::pair<Scenario, std::string_view> kScenarioNames[] = {
    {Scenario::time_convergence, "time_convergence"},
    {Scenario::space_convergence, "space_convergence"},
    {Scenario::nonlinearity_sweep, "nonlinearity_sweep"},
    {Scenario::ibq_limit, "ibq_limit"},
    {Scenario::collision, "collision"},
    {Scenario::blowup_refinement, "blowup_refinement"},
    {Scenario::blowup_profile, "blowup_profile"},
    {Scenario::blowup_eta2_sweep, "blowup_eta2_sweep"},
    {Scenario::blowup_p_sweep, "blowup_p_sweep"},
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

template <class T>
std::string fmt_list(const std::vector<T>& xs) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  os << ']';
  return os.str();
}

void add_common_metadata(ResultSet& rs, const ExperimentConfig& cfg) {
  auto& m = rs.metadata;
  m.emplace_back("scenario", rs.scenario);
  m.emplace_back("eta1", fmt(cfg.params.eta1));
  m.emplace_back("eta2", fmt(cfg.params.eta2));
  m.emplace_back("p", std::to_string(cfg.params.p));
  m.emplace_back("sign", std::to_string(cfg.params.sign));
  m.emplace_back("L", fmt(cfg.L));
  m.emplace_back("N", std::to_string(cfg.N));
  m.emplace_back("M", std::to_string(cfg.M));
  m.emplace_back("T", fmt(cfg.T));
  m.emplace_back("dealiasing", cfg.dealiasing == Dealiasing::none ? "none" : "two_thirds");
  m.emplace_back("determinism", "no random inputs; identical config gives identical output");
}

double solitary_error(const SolitaryWave& wave, const GridSpec& grid, const TimeGrid& tgrid,
                      Dealiasing dealiasing) {
  EvolveOptions opts;
  opts.sample_stride = tgrid.steps();
  opts.dealiasing = dealiasing;
  const Trajectory traj = evolve(solitary_initial_state(wave, grid), grid, wave.params, tgrid, opts);
  if (traj.blew_up()) return kNaN;
  const State exact = solitary_state(wave, grid, tgrid.final_time());
  return linf_error(traj.final.u, exact.u);
}

Table convergence_table(const std::string& name, const std::string& resolution,
                        const std::vector<std::pair<int, double>>& rows) {
  Table t{name, {resolution, "linf_error", "order"}, {}};
  if (rows.size() < 2) {
    for (const auto& [r, e] : rows) t.add_row({double(r), e, kNaN});
    return t;
  }
  for (const auto& row : convergence_order(rows))
    t.add_row({double(row.resolution), row.error, row.order.value_or(kNaN)});
  return t;
}

int count_pulses(std::span<const double> u, double level) {
  int count = 0;
  const std::size_t n = u.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double left = u[(j + n - 1) % n];
    const double right = u[(j + 1) % n];
    if (u[j] > level && u[j] >= left && u[j] > right) ++count;
  }
  return count;
}

double phi_quadratic(double x) { return 4.0 * (2.0 * x * x / 3.0 - 1.0) * std::exp(-x * x / 3.0); }
double psi_quadratic(double x) { return (x * x - 1.0) * std::exp(-x * x / 2.0); }
double Phi_quadratic(double x) { return -4.0 * x * std::exp(-x * x / 3.0); }
double Psi_quadratic(double x) { return -x * std::exp(-x * x / 2.0); }
double psi_x_quadratic(double x) { return x * (3.0 - x * x) * std::exp(-x * x / 2.0); }

double phi_cubic(double x) { return 13.0 * (x * x / 2.0 - 1.0) * std::exp(-x * x / 4.0); }
double psi_cubic(double x) { return (1.0 - x * x) * std::exp(-x * x / 2.0); }
double Phi_cubic(double x) { return -13.0 * x * std::exp(-x * x / 4.0); }
double Psi_cubic(double x) { return x * std::exp(-x * x / 2.0); }
double psi_x_cubic(double x) { return -x * (3.0 - x * x) * std::exp(-x * x / 2.0); }

struct BlowupOutcome {
  std::optional<double> t_blowup;
  double t_divergence = kNaN;
  double I3_0 = kNaN;
  bool mu_ok = false;
  Trajectory traj;
};

BlowupOutcome run_blowup_case(const BlowupData& data, const HbqParams& params,
                              const ExperimentConfig& cfg, int n, int m, double T) {
  const GridSpec grid = make_grid(cfg.L, n);
  BlowupOutcome out;
  out.I3_0 = blowup_initial_energy(data, grid, params);
  out.mu_ok = blowup_condition_check(params, blowup_mu(params.p), -1e3, 1e3);

  EvolveOptions opts;
  opts.sample_stride = m;  // the per-step norm trace is all we need
  opts.blowup_guard = cfg.guard;
  opts.dealiasing = cfg.dealiasing;
  out.traj = evolve(blowup_initial_state(data, grid), grid, params, TimeGrid(T, m), opts);
  out.t_blowup = detect_blowup_time(out.traj, cfg.threshold);
  if (out.traj.blew_up()) out.t_divergence = out.traj.final.t;
  return out;
}

std::vector<double> blowup_row_tail(const BlowupOutcome& o) {
  const bool criterion = o.I3_0 < 0.0 && o.mu_ok;
  const bool labeled = criterion && o.t_blowup.has_value();
  return {o.t_blowup.value_or(kNaN), o.t_divergence, o.I3_0, criterion ? 1.0 : 0.0,
          labeled ? 1.0 : 0.0};
}

const std::vector<std::string> kBlowupTail = {"t_blowup", "t_divergence", "I3_0",
                                              "criterion_met", "blowup_labeled"};

std::vector<std::string> with_tail(std::vector<std::string> head) {
  head.insert(head.end(), kBlowupTail.begin(), kBlowupTail.end());
  return head;
}

HbqParams blowup_params(const BlowupData& data, double eta1, double eta2) {
  HbqParams p = data.params;
  p.eta1 = eta1;
  p.eta2 = eta2;
  return p;
}

void add_blowup_metadata(ResultSet& rs, const ExperimentConfig& cfg) {
  rs.metadata.emplace_back("blowup_threshold", fmt(cfg.threshold));
  rs.metadata.emplace_back("blowup_guard", fmt(cfg.guard));
  rs.metadata.emplace_back("cubic_T", fmt(cfg.cubic_T));
  rs.metadata.emplace_back(
      "precondition_note",
      "criterion_met requires I3(0) < 0 and a sampled mu-inequality pass on [-1e3,1e3]; "
      "runs without it still execute but are not labeled blow-up");
}

ResultSet run_blowup_refinement(const ExperimentConfig& cfg) {
  ResultSet rs;
  rs.scenario = std::string(to_string(cfg.scenario));
  add_common_metadata(rs, cfg);
  add_blowup_metadata(rs, cfg);
  rs.metadata.emplace_back("ladder_N_M", [&] {
    std::ostringstream os;
    for (const auto& [n, m] : cfg.ladder) os << n << ':' << m << ' ';
    return os.str();
  }());

  struct Job {
    BlowupCase which;
    int n, m;
  };
  std::vector<Job> jobs;
  for (BlowupCase c : cfg.blowup_cases)
    for (const auto& [n, m] : cfg.ladder) jobs.push_back({c, n, m});

  std::vector<BlowupOutcome> outcomes(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), cfg.jobs, [&](int i) {
    const Job& j = jobs[static_cast<std::size_t>(i)];
    const BlowupData data = blowup_data(j.which);
    const double T = j.which == BlowupCase::quadratic ? cfg.T : cfg.cubic_T;
    outcomes[static_cast<std::size_t>(i)] = run_blowup_case(
        data, blowup_params(data, cfg.params.eta1, cfg.params.eta2), cfg, j.n, j.m, T);
  });

  Table summary{rs.scenario, with_tail({"p", "sign", "N", "M"}), {}};
  Table trace{"trace", {"p", "sign", "N", "M", "t", "linf_u"}, {}};
  Table pre{"preconditions", {"p", "sign", "mu", "mu_check", "I3_0"}, {}};
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const BlowupData data = blowup_data(jobs[i].which);
    const double p = data.params.p, s = data.params.sign;
    std::vector<double> row{p, s, double(jobs[i].n), double(jobs[i].m)};
    for (double x : blowup_row_tail(outcomes[i])) row.push_back(x);
    summary.add_row(std::move(row));
    for (const auto& ns : outcomes[i].traj.norms)
      trace.add_row({p, s, double(jobs[i].n), double(jobs[i].m), ns.t, ns.linf_u});
    if (i + 1 == jobs.size() || jobs[i + 1].which != jobs[i].which)
      pre.add_row({p, s, data.mu, outcomes[i].mu_ok ? 1.0 : 0.0, outcomes[i].I3_0});
  }
  rs.tables = {std::move(summary), std::move(trace), std::move(pre)};
  return rs;
}

ResultSet run_blowup_profile(const ExperimentConfig& cfg) {
  ResultSet rs;
  rs.scenario = std::string(to_string(cfg.scenario));
  add_common_metadata(rs, cfg);
  add_blowup_metadata(rs, cfg);
  rs.metadata.emplace_back("snapshot_times", fmt_list(cfg.snapshot_times));
  rs.metadata.emplace_back("snapshot_method",
                           "times off the step grid are reached with one partial RK4 step");

  const BlowupData data = blowup_data(BlowupCase::quadratic);
  const HbqParams params = blowup_params(data, cfg.params.eta1, cfg.params.eta2);
  const GridSpec grid = make_grid(cfg.L, cfg.N);
  const TimeGrid tgrid(cfg.T, cfg.M);

  std::vector<double> snaps = cfg.snapshot_times;
  std::sort(snaps.begin(), snaps.end());

  Table profile{rs.scenario, {"t", "x", "u"}, {}};
  Table norms{"snapshot_norms", {"t", "linf_u", "finite"}, {}};
  const std::vector<double> x = grid.nodes();

  Rk4Stepper stepper(grid, params, cfg.dealiasing);
  State state = blowup_initial_state(data, grid);
  std::size_t next = 0;
  bool alive = true;
  auto record = [&](const State& s, double t) {
    const bool finite = s.finite();
    norms.add_row({t, finite ? max_abs(s.u) : kNaN, finite ? 1.0 : 0.0});
    if (!finite) return;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (std::abs(x[j]) <= cfg.profile_window) profile.add_row({t, x[j], s.u[j]});
  };
  for (int n = 0; n < tgrid.steps() && next < snaps.size() && alive; ++n) {
    const double t0 = tgrid.time(n), t1 = tgrid.time(n + 1);
    while (next < snaps.size() && snaps[next] < t0) ++next;
    while (next < snaps.size() && snaps[next] <= t1) {
      State partial = state;
      const double h = snaps[next] - t0;
      bool ok = h == 0.0 || stepper.try_step(partial, h);
      partial.t = snaps[next];
      if (ok) record(partial, snaps[next]);
      else norms.add_row({snaps[next], kNaN, 0.0});
      ++next;
    }
    alive = stepper.try_step(state, tgrid.dt());
    state.t = t1;
  }
  for (; next < snaps.size(); ++next) norms.add_row({snaps[next], kNaN, 0.0});

  rs.tables = {std::move(profile), std::move(norms)};
  return rs;
}

ResultSet run_blowup_eta2_sweep(const ExperimentConfig& cfg) {
  ResultSet rs;
  rs.scenario = std::string(to_string(cfg.scenario));
  add_common_metadata(rs, cfg);
  add_blowup_metadata(rs, cfg);
  rs.metadata.emplace_back("eta2_list", fmt_list(cfg.eta2_list));

  struct Job {
    BlowupCase which;
    double eta2;
  };
  std::vector<Job> jobs;
  for (BlowupCase c : cfg.blowup_cases)
    for (double e2 : cfg.eta2_list) jobs.push_back({c, e2});

  std::vector<BlowupOutcome> outcomes(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), cfg.jobs, [&](int i) {
    const Job& j = jobs[static_cast<std::size_t>(i)];
    const BlowupData data = blowup_data(j.which);
    const double T = j.which == BlowupCase::quadratic ? cfg.T : cfg.cubic_T;
    outcomes[static_cast<std::size_t>(i)] =
        run_blowup_case(data, blowup_params(data, cfg.params.eta1, j.eta2), cfg, cfg.N, cfg.M, T);
    outcomes[static_cast<std::size_t>(i)].traj = {};
  });

  Table t{rs.scenario, with_tail({"p", "sign", "eta2"}), {}};
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const BlowupData data = blowup_data(jobs[i].which);
    std::vector<double> row{double(data.params.p), double(data.params.sign), jobs[i].eta2};
    for (double x : blowup_row_tail(outcomes[i])) row.push_back(x);
    t.add_row(std::move(row));
  }
  std::sort(t.rows.begin(), t.rows.end());
  rs.tables = {std::move(t)};
  return rs;
}

ResultSet run_blowup_p_sweep(const ExperimentConfig& cfg) {
  ResultSet rs;
  rs.scenario = std::string(to_string(cfg.scenario));
  add_common_metadata(rs, cfg);
  add_blowup_metadata(rs, cfg);
  rs.metadata.emplace_back("p_list", fmt_list(cfg.p_list));
  rs.metadata.emplace_back("pairing",
                           "even p: quadratic data with f=+u^p; odd p: cubic data with f=-u^p");

  std::vector<BlowupOutcome> outcomes(cfg.p_list.size());
  std::vector<HbqParams> used(cfg.p_list.size());
  parallel_for(static_cast<int>(cfg.p_list.size()), cfg.jobs, [&](int i) {
    const int p = cfg.p_list[static_cast<std::size_t>(i)];
    const BlowupCase which = p % 2 == 0 ? BlowupCase::quadratic : BlowupCase::cubic;
    const BlowupData data = blowup_data(which);
    HbqParams params = blowup_params(data, cfg.params.eta1, cfg.params.eta2);
    params.p = p;
    used[static_cast<std::size_t>(i)] = params;
    const double T = which == BlowupCase::quadratic ? cfg.T : cfg.cubic_T;
    outcomes[static_cast<std::size_t>(i)] = run_blowup_case(data, params, cfg, cfg.N, cfg.M, T);
    outcomes[static_cast<std::size_t>(i)].traj = {};
  });

  Table t{rs.scenario, with_tail({"p", "sign", "mu"}), {}};
  for (std::size_t i = 0; i < used.size(); ++i) {
    std::vector<double> row{double(used[i].p), double(used[i].sign), blowup_mu(used[i].p)};
    for (double x : blowup_row_tail(outcomes[i])) row.push_back(x);
    t.add_row(std::move(row));
  }
  std::sort(t.rows.begin(), t.rows.end());
  rs.tables = {std::move(t)};
  return rs;
}

}  // namespace

std::string_view to_string(Scenario s) {
  for (const auto& [sc, name] : kScenarioNames)
    if (sc == s) return name;
  return "unknown";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  for (const auto& [sc, n] : kScenarioNames)
    if (n == name) return sc;
  return std::nullopt;
}

const std::vector<Scenario>& all_scenarios() {
  static const std::vector<Scenario> all = [] {
    std::vector<Scenario> v;
    for (const auto& [sc, n] : kScenarioNames) v.push_back(sc);
    return v;
  }();
  return all;
}

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    throw InvalidArgument("row width " + std::to_string(row.size()) + " does not match table '" +
                          name + "'");
  rows.push_back(std::move(row));
}

std::size_t Table::column(std::string_view col) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == col) return i;
  throw InvalidArgument("no column '" + std::string(col) + "' in table '" + name + "'");
}

const Table& ResultSet::table(std::string_view name) const {
  for (const auto& t : tables)
    if (t.name == name) return t;
  throw InvalidArgument("no table '" + std::string(name) + "' in result set " + scenario);
}

Table& ResultSet::table(std::string_view name) {
  return const_cast<Table&>(std::as_const(*this).table(name));
}

bool ResultSet::empty() const {
  return std::all_of(tables.begin(), tables.end(), [](const Table& t) { return t.rows.empty(); });
}

const std::string* ResultSet::find_metadata(std::string_view key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return &v;
  return nullptr;
}

void ExperimentConfig::validate() const {
  params.validate();
  make_grid(L, N);
  TimeGrid(T, M);
  if (jobs < 1) throw InvalidArgument("jobs must be at least 1");
  if (sample_stride < 1) throw InvalidArgument("sample_stride must be at least 1");
  if (!(threshold > 0.0)) throw InvalidArgument("threshold must be positive");
  if (!(guard >= threshold)) throw InvalidArgument("guard must not be below the threshold");
  if (!(nu > 0.0)) throw InvalidArgument("nu must be positive");
  for (int n : N_list) make_grid(L, n);
  for (int m : M_list) TimeGrid(T, m);
  for (const auto& [n, m] : ladder) {
    make_grid(L, n);
    TimeGrid(T, m);
  }
  for (int p : p_list)
    if (p < 2) throw InvalidArgument("p_list entries must be >= 2");
  for (double e : eta2_list)
    if (!(e >= 0.0)) throw InvalidArgument("eta2_list entries must be >= 0");
  for (double e : collision_etas)
    if (!(e > 0.0)) throw InvalidArgument("collision_etas entries must be > 0");
}

ExperimentConfig default_config(Scenario s) {
  ExperimentConfig c;
  c.scenario = s;
  c.params = HbqParams{1.0, 1.0, 2, +1};
  switch (s) {
    case Scenario::time_convergence:
      c.M_list = {2, 5, 10, 50, 100};
      break;
    case Scenario::space_convergence:
      c.M = 1000;
      c.N_list = {10, 50, 100, 150, 200};
      break;
    case Scenario::nonlinearity_sweep:
      c.p_list = {2, 3, 4, 5};
      c.N_list = {64, 128, 256, 512};
      break;
    case Scenario::ibq_limit:
      c.M = 5000;
      c.eta2_list = {10, 5, 1, 0.8, 0.5, 0.3, 0.1};
      c.p_list = {2, 3};
      break;
    case Scenario::collision:
      c.M = 7200;
      c.T = 72.0;
      c.collision_etas = {1.0, 2.0};
      c.sample_stride = 100;
      break;
    case Scenario::blowup_refinement:
    case Scenario::blowup_profile:
    case Scenario::blowup_eta2_sweep:
    case Scenario::blowup_p_sweep:
      c.L = 10.0;
      c.N = 512;
      c.M = 4000;
      c.T = 4.0;
      c.ladder = {{64, 500}, {128, 1000}, {256, 2000}, {512, 4000}};
      c.blowup_cases = {BlowupCase::quadratic, BlowupCase::cubic};
      c.eta2_list = {0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0};
      c.p_list = {2, 3, 4, 5, 6};
      c.snapshot_times = {3.710, 3.711, 3.7115, 3.712};
      if (s == Scenario::blowup_profile) c.guard = std::numeric_limits<double>::infinity();
      break;
  }
  return c;
}

double blowup_mu(int p) { return (p - 1) / 4.0; }

BlowupData blowup_data(BlowupCase c) {
  if (c == BlowupCase::quadratic)
    return {c, HbqParams{1.0, 1.0, 2, +1}, 0.25,
            phi_quadratic, psi_quadratic, Phi_quadratic, Psi_quadratic, psi_x_quadratic};
  return {c, HbqParams{1.0, 1.0, 3, -1}, 0.5,
          phi_cubic, psi_cubic, Phi_cubic, Psi_cubic, psi_x_cubic};
}

State blowup_initial_state(const BlowupData& data, const GridSpec& grid) {
  State s;
  s.u = grid.sample(data.phi);
  s.v = grid.sample(data.psi);
  return s;
}

double blowup_initial_energy(const BlowupData& data, const GridSpec& grid,
                             const HbqParams& params) {
  return energy_integral(grid.sample(data.phi), grid.sample(data.Psi), grid.sample(data.psi),
                         grid.sample(data.psi_x), grid, params);
}

State collision_initial_state(const HbqParams& params, const GridSpec& grid, double left_center,
                              double right_center) {
  const SolitaryWave right_mover = solitary_params(params).centered_at(left_center);
  const SolitaryWave left_mover = right_mover.reversed().centered_at(right_center);
  State a = solitary_initial_state(right_mover, grid);
  const State b = solitary_initial_state(left_mover, grid);
  for (std::size_t j = 0; j < a.u.size(); ++j) {
    a.u[j] += b.u[j];
    a.v[j] += b.v[j];
  }
  return a;
}

ResultSet run_time_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  ResultSet rs;
  rs.scenario = std::string(to_string(Scenario::time_convergence));
  add_common_metadata(rs, cfg);
  rs.metadata.emplace_back("M_list", fmt_list(cfg.M_list));

  const GridSpec grid = make_grid(cfg.L, cfg.N);
  const SolitaryWave wave = solitary_params(cfg.params);
  std::vector<std::pair<int, double>> rows(cfg.M_list.size());
  parallel_for(static_cast<int>(rows.size()), cfg.jobs, [&](int i) {
    const int m = cfg.M_list[static_cast<std::size_t>(i)];
    rows[static_cast<std::size_t>(i)] = {m, solitary_error(wave, grid, TimeGrid(cfg.T, m), cfg.dealiasing)};
  });
  std::sort(rows.begin(), rows.end());
  rs.tables.push_back(convergence_table(rs.scenario, "M", rows));
  return rs;
}

ResultSet run_space_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  ResultSet rs;
  rs.scenario = std::string(to_string(Scenario::space_convergence));
  add_common_metadata(rs, cfg);
  rs.metadata.emplace_back("N_list", fmt_list(cfg.N_list));

  const SolitaryWave wave = solitary_params(cfg.params);
  std::vector<std::pair<int, double>> rows(cfg.N_list.size());
  parallel_for(static_cast<int>(rows.size()), cfg.jobs, [&](int i) {
    const int n = cfg.N_list[static_cast<std::size_t>(i)];
    rows[static_cast<std::size_t>(i)] = {
        n, solitary_error(wave, make_grid(cfg.L, n), TimeGrid(cfg.T, cfg.M), cfg.dealiasing)};
  });
  std::sort(rows.begin(), rows.end());
  rs.tables.push_back(convergence_table(rs.scenario, "N", rows));
  return rs;
}

ResultSet run_nonlinearity_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  ResultSet rs;
  rs.scenario = std::string(to_string(Scenario::nonlinearity_sweep));
  add_common_metadata(rs, cfg);
  rs.metadata.emplace_back("nu", fmt(cfg.nu));
  rs.metadata.emplace_back("p_list", fmt_list(cfg.p_list));
  rs.metadata.emplace_back("N_list", fmt_list(cfg.N_list));

  struct Job {
    int p, n, m;
  };
  std::vector<Job> jobs;
  for (int p : cfg.p_list)
    for (int n : cfg.N_list) {
      const double dx = 2.0 * cfg.L / n;
      const int m = std::max(1, static_cast<int>(std::lround(cfg.T / (cfg.nu * dx))));
      jobs.push_back({p, n, m});
    }

  std::vector<double> errors(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), cfg.jobs, [&](int i) {
    const Job& j = jobs[static_cast<std::size_t>(i)];
    HbqParams params = cfg.params;
    params.p = j.p;
    params.sign = +1;
    errors[static_cast<std::size_t>(i)] = solitary_error(
        solitary_params(params), make_grid(cfg.L, j.n), TimeGrid(cfg.T, j.m), cfg.dealiasing);
  });

  Table t{rs.scenario, {"p", "N", "M", "linf_error"}, {}};
  for (std::size_t i = 0; i < jobs.size(); ++i)
    t.add_row({double(jobs[i].p), double(jobs[i].n), double(jobs[i].m), errors[i]});
  std::sort(t.rows.begin(), t.rows.end());
  rs.tables.push_back(std::move(t));
  return rs;
}

ResultSet run_ibq_limit(const ExperimentConfig& cfg) {
  cfg.validate();
  ResultSet rs;
  rs.scenario = std::string(to_string(Scenario::ibq_limit));
  add_common_metadata(rs, cfg);
  rs.metadata.emplace_back("ibq_amplitude", fmt(cfg.amplitude));
  rs.metadata.emplace_back("eta2_list", fmt_list(cfg.eta2_list));
  rs.metadata.emplace_back("p_list", fmt_list(cfg.p_list));
  rs.metadata.emplace_back("ibq_velocity", "v(x,0) is the exact time derivative of the IBq wave");

  const GridSpec grid = make_grid(cfg.L, cfg.N);
  const State initial = ibq_initial_state(cfg.amplitude, grid);

  struct Job {
    int p;
    double eta2;
  };
  std::vector<Job> jobs;
  for (int p : cfg.p_list)
    for (double e2 : cfg.eta2_list) jobs.push_back({p, e2});

  std::vector<State> finals(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), cfg.jobs, [&](int i) {
    const Job& j = jobs[static_cast<std::size_t>(i)];
    HbqParams params = cfg.params;
    params.p = j.p;
    params.sign = +1;
    params.eta2 = j.eta2;
    EvolveOptions opts;
    opts.sample_stride = cfg.M;
    opts.dealiasing = cfg.dealiasing;
    finals[static_cast<std::size_t>(i)] =
        evolve(initial, grid, params, TimeGrid(cfg.T, cfg.M), opts).final;
  });

  Table amps{rs.scenario, {"p", "eta2", "amplitude"}, {}};
  Table profiles{"profiles", {"p", "eta2", "x", "u"}, {}};
  const std::vector<double> x = grid.nodes();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& u = finals[i].u;
    amps.add_row({double(jobs[i].p), jobs[i].eta2, *std::max_element(u.begin(), u.end())});
    for (std::size_t j = 0; j < x.size(); ++j)
      if (std::abs(x[j]) <= cfg.profile_window)
        profiles.add_row({double(jobs[i].p), jobs[i].eta2, x[j], u[j]});
  }
  // eta2 = 0 rows carry the exact IBq wave (quadratic nonlinearity) at time T.
  for (std::size_t j = 0; j < x.size(); ++j)
    if (std::abs(x[j]) <= cfg.profile_window)
      profiles.add_row({2.0, 0.0, x[j], ibq_profile(cfg.amplitude, x[j], cfg.T)});

  std::sort(amps.rows.begin(), amps.rows.end());
  std::sort(profiles.rows.begin(), profiles.rows.end());
  rs.tables = {std::move(amps), std::move(profiles)};
  return rs;
}

ResultSet run_collision(const ExperimentConfig& cfg) {
  cfg.validate();
  ResultSet rs;
  rs.scenario = std::string(to_string(Scenario::collision));
  add_common_metadata(rs, cfg);
  rs.metadata.emplace_back("collision_etas", fmt_list(cfg.collision_etas));
  rs.metadata.emplace_back("centers", fmt_list(std::vector<double>{cfg.left_center, cfg.right_center}));
  rs.metadata.emplace_back("I1_convention", "I1 is monitored as 2L*mean(u)");

  const GridSpec grid = make_grid(cfg.L, cfg.N);
  const TimeGrid tgrid(cfg.T, cfg.M);

  struct Outcome {
    SolitaryWave wave;
    double max_drift = 0.0;
    double max_detrended = 0.0;
    double mean_v0 = 0.0;
    Table history;
    Table surface;
    int pulses = 0;
  };
  std::vector<Outcome> outcomes(cfg.collision_etas.size());
  const std::vector<double> x = grid.nodes();

  parallel_for(static_cast<int>(outcomes.size()), cfg.jobs, [&](int i) {
    Outcome& o = outcomes[static_cast<std::size_t>(i)];
    const double eta = cfg.collision_etas[static_cast<std::size_t>(i)];
    HbqParams params{eta, eta, 2, +1};
    o.wave = solitary_params(params);
    const State initial = collision_initial_state(params, grid, cfg.left_center, cfg.right_center);
    const double I1_0 = mass_surrogate(initial.u, grid);
    // d/dt (2L mean u) = 2L mean v exactly, so any mean in v(., 0) (from the
    // truncated sech tails) shows up as a linear trend in the drift.
    o.mean_v0 = mean(initial.v);
    const double trend_rate = grid.length() * o.mean_v0;
    o.history = {"history", {"eta", "t", "max_u", "I1_drift", "I1_drift_detrended"}, {}};
    o.surface = {"surface", {"eta", "x", "t", "u"}, {}};

    auto record = [&](const State& s, double drift, double detrended) {
      o.history.add_row({eta, s.t, max_abs(s.u), drift, detrended});
      for (std::size_t j = 0; j < x.size(); ++j) o.surface.add_row({eta, x[j], s.t, s.u[j]});
    };
    record(initial, 0.0, 0.0);

    EvolveOptions opts;
    opts.sample_stride = tgrid.steps();
    opts.dealiasing = cfg.dealiasing;
    int step = 0;
    opts.on_step = [&](const State& s) {
      const double change = mass_surrogate(s.u, grid) - I1_0;
      const double drift = std::abs(change);
      const double detrended = std::abs(change - trend_rate * (s.t - initial.t));
      o.max_drift = std::max(o.max_drift, drift);
      o.max_detrended = std::max(o.max_detrended, detrended);
      if (++step % cfg.sample_stride == 0) record(s, drift, detrended);
    };
    const Trajectory traj = evolve(initial, grid, params, tgrid, opts);
    o.pulses = count_pulses(traj.final.u, 0.5 * o.wave.amplitude);
  });

  Table summary{rs.scenario,
                {"eta", "amplitude", "speed", "max_I1_drift", "max_I1_drift_detrended", "mean_v0",
                 "pulses_final"},
                {}};
  Table history{"history", {"eta", "t", "max_u", "I1_drift", "I1_drift_detrended"}, {}};
  Table surface{"surface", {"eta", "x", "t", "u"}, {}};
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const Outcome& o = outcomes[i];
    summary.add_row({cfg.collision_etas[i], o.wave.amplitude, o.wave.speed, o.max_drift,
                     o.max_detrended, o.mean_v0, double(o.pulses)});
    history.rows.insert(history.rows.end(), o.history.rows.begin(), o.history.rows.end());
    surface.rows.insert(surface.rows.end(), o.surface.rows.begin(), o.surface.rows.end());
  }
  rs.tables = {std::move(summary), std::move(history), std::move(surface)};
  return rs;
}

ResultSet run_blowup(const ExperimentConfig& cfg) {
  cfg.validate();
  switch (cfg.scenario) {
    case Scenario::blowup_refinement: return run_blowup_refinement(cfg);
    case Scenario::blowup_profile: return run_blowup_profile(cfg);
    case Scenario::blowup_eta2_sweep: return run_blowup_eta2_sweep(cfg);
    case Scenario::blowup_p_sweep: return run_blowup_p_sweep(cfg);
    default: break;
  }
  throw InvalidArgument("run_blowup called with non-blow-up scenario " +
                        std::string(to_string(cfg.scenario)));
}

ResultSet run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::time_convergence: return run_time_convergence(cfg);
    case Scenario::space_convergence: return run_space_convergence(cfg);
    case Scenario::nonlinearity_sweep: return run_nonlinearity_sweep(cfg);
    case Scenario::ibq_limit: return run_ibq_limit(cfg);
    case Scenario::collision: return run_collision(cfg);
    default: return run_blowup(cfg);
  }
}

void parallel_for(int count, int jobs, const std::function<void(int)>& task) {
  if (count <= 0) return;
  const int workers = std::clamp(jobs, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace hbq
