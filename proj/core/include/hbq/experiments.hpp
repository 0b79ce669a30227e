#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hbq/integrator.hpp"
#include "hbq/model.hpp"
#include "hbq/spectral.hpp"

namespace hbq {

enum class Scenario {
  time_convergence,
  space_convergence,
  nonlinearity_sweep,
  ibq_limit,
  collision,
  blowup_refinement,
  blowup_profile,
  blowup_eta2_sweep,
  blowup_p_sweep,
};

std::string_view to_string(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view name);
const std::vector<Scenario>& all_scenarios();

/// One named block of numeric rows.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  std::size_t column(std::string_view name) const;
};

/// Output of a scenario runner.  The first table is the primary one.
struct ResultSet {
  std::string scenario;
  std::vector<Table> tables;
  std::vector<std::pair<std::string, std::string>> metadata;

  const Table& table(std::string_view name) const;
  Table& table(std::string_view name);
  bool empty() const;
  const std::string* find_metadata(std::string_view key) const;
};

/// Which initial pair to use for blow-up runs.
enum class BlowupCase { quadratic, cubic };

struct ExperimentConfig {
  Scenario scenario = Scenario::time_convergence;
  HbqParams params;
  double L = 100.0;
  int N = 512;
  int M = 100;
  double T = 5.0;

  std::vector<int> M_list;
  std::vector<int> N_list;
  std::vector<int> p_list;
  std::vector<double> eta2_list;
  std::vector<double> collision_etas;  // eta1 = eta2 per collision case
  std::vector<std::pair<int, int>> ladder;  // (N, M) refinement pairs
  std::vector<double> snapshot_times;
  std::vector<BlowupCase> blowup_cases;

  double amplitude = 0.9;  // IBq initial amplitude
  double left_center = -40.0;
  double right_center = 40.0;
  double nu = 2.56e-3;  // dt/dx for the nonlinearity sweep
  double cubic_T = 0.4;
  double threshold = 100.0;
  double guard = 1e6;
  double profile_window = 30.0;  // |x| range of emitted profiles
  int sample_stride = 100;
  int jobs = 1;
  Dealiasing dealiasing = Dealiasing::none;

  void validate() const;
};

/// Reference setup for each scenario.
ExperimentConfig default_config(Scenario s);

/// Blow-up initial data phi, psi with closed-form antiderivatives Phi, Psi
/// and psi'.
struct BlowupData {
  BlowupCase which;
  HbqParams params;  // eta1 = eta2 = 1 and the nonlinearity that pairs with the data
  double mu;         // constant for the blow-up inequality
  double (*phi)(double);
  double (*psi)(double);
  double (*Phi)(double);
  double (*Psi)(double);
  double (*psi_x)(double);
};

BlowupData blowup_data(BlowupCase c);

/// mu = (p-1)/4 satisfies u f(u) <= 2 mu u^2 + 2 (1+2mu) F(u) for +-u^p.
double blowup_mu(int p);

State blowup_initial_state(const BlowupData& data, const GridSpec& grid);

/// I3 at t = 0 from the closed-form antiderivatives.
double blowup_initial_energy(const BlowupData& data, const GridSpec& grid,
                             const HbqParams& params);

/// Two counter-propagating solitary waves of the (eta1, eta2) family.
State collision_initial_state(const HbqParams& params, const GridSpec& grid, double left_center,
                              double right_center);

ResultSet run_time_convergence(const ExperimentConfig& cfg);
ResultSet run_space_convergence(const ExperimentConfig& cfg);
ResultSet run_nonlinearity_sweep(const ExperimentConfig& cfg);
ResultSet run_ibq_limit(const ExperimentConfig& cfg);
ResultSet run_collision(const ExperimentConfig& cfg);
/// Handles every blowup_* scenario.
ResultSet run_blowup(const ExperimentConfig& cfg);

/// Dispatches on cfg.scenario.
ResultSet run_experiment(const ExperimentConfig& cfg);

/// Runs tasks 0..count-1 on up to jobs threads.  Each result lands at its
/// own index, so output order never depends on scheduling.
void parallel_for(int count, int jobs, const std::function<void(int)>& task);

}  // namespace hbq
