#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dflux/dg_core.hpp"
#include "dflux/scenario.hpp"

namespace dflux {

/// Cell-average observables of one solution snapshot.
struct ProfileSnapshot {
  double time = 0.0;
  std::vector<std::string> columns;  // observable names, without "x"
  std::vector<double> x;
  std::vector<std::vector<double>> values;  // values[column][cell]

  std::size_t rows() const { return x.size(); }
  const std::vector<double>& column(std::string_view name) const;
};

ProfileSnapshot make_snapshot(const DGState& state, const Mesh& mesh, const SystemModel& model);

/// CSV with header "x,<observables...>", one row per cell, `precision`
/// significant digits.
void write_snapshot_csv(const ProfileSnapshot& snap, const std::filesystem::path& path, int precision = 17);
/// Reads a CSV written by write_snapshot_csv. Time is not stored in the file
/// and is left at 0.
ProfileSnapshot read_snapshot_csv(const std::filesystem::path& path);

/// Significant digits for CSV output; DFLUX_CSV_PRECISION overrides the default 17.
int csv_precision_from_env();

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  int precision = 17;
};

struct RunResult {
  std::vector<ProfileSnapshot> snapshots;
  std::vector<std::filesystem::path> files;
  std::size_t steps = 0;
  double wall_seconds = 0.0;
  StateVec mass_initial;
  StateVec mass_final;
  /// Time-integrated net flux through the domain boundaries.
  StateVec boundary_inflow;
  /// True if the first and last cell averages never moved from their initial values.
  bool edge_cells_constant = true;
  DGState final_state;
  nlohmann::json manifest;
};

/// Projects the initial data, then steps with the CFL time step clipped to
/// land exactly on snapshot times, the periodic-switch time and t_end. Writes
/// one CSV per snapshot plus manifest.json when out_dir is set.
///
/// On a SolverError the last valid state is written to last_valid.csv and the
/// manifest records the failure before the error is rethrown.
RunResult run(const Scenario& scenario, const RunOptions& options = {});

/// Relative drift |M_end - M_0| / |M_0| per component (absolute when M_0 = 0).
std::vector<double> relative_mass_drift(const StateVec& initial, const StateVec& final_mass);

struct ConvergenceRow {
  std::size_t cells = 0;
  double l1_error = 0.0;
  std::optional<double> order;  // log(e_prev / e) / log(N / N_prev) against the previous row
};

/// Self-convergence study: runs the scenario at each mesh size and at the
/// reference size (default 4x the finest) and compares cell averages in L1.
/// Requires uniform theta and smooth initial data (ConfigError otherwise).
std::vector<ConvergenceRow> convergence_study(const Scenario& base, std::vector<std::size_t> meshes,
                                              std::optional<std::size_t> reference_cells = std::nullopt);

/// Conserved-variable average over [a, b] of an exact solution at t_end.
using ExactCellAverage = std::function<StateVec(double a, double b)>;

/// Same study against an exact solution instead of a fine-mesh reference.
std::vector<ConvergenceRow> convergence_study_exact(const Scenario& base, std::vector<std::size_t> meshes,
                                                    const ExactCellAverage& exact);

}  // namespace dflux
