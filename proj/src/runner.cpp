#include "dflux/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dflux/errors.hpp"

namespace dflux {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<double>& ProfileSnapshot::column(std::string_view name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == name) return values[c];
  }
  throw ConfigError("snapshot has no column '" + std::string(name) + "'");
}

ProfileSnapshot make_snapshot(const DGState& state, const Mesh& mesh, const SystemModel& model) {
  ProfileSnapshot snap;
  snap.time = state.time();
  snap.columns = model.observable_names();
  snap.values.assign(snap.columns.size(), std::vector<double>(state.n_cells()));
  snap.x.resize(state.n_cells());
  for (std::size_t j = 0; j < state.n_cells(); ++j) {
    snap.x[j] = mesh.center(j);
    const StateVec obs = model.observables(state.average(j), mesh.theta(j));
    for (std::size_t c = 0; c < snap.columns.size(); ++c) snap.values[c][j] = obs[c];
  }
  return snap;
}

void write_snapshot_csv(const ProfileSnapshot& snap, const fs::path& path, int precision) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "x";
  for (const auto& c : snap.columns) out << ',' << c;
  out << '\n';
  char buf[64];
  for (std::size_t j = 0; j < snap.rows(); ++j) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, snap.x[j]);
    out << buf;
    for (const auto& col : snap.values) {
      std::snprintf(buf, sizeof buf, "%.*g", precision, col[j]);
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

ProfileSnapshot read_snapshot_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open snapshot '" + path.string() + "'");
  ProfileSnapshot snap;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("snapshot '" + path.string() + "' is empty");
  {
    std::stringstream header(line);
    std::string cell;
    std::getline(header, cell, ',');
    if (cell != "x") throw ConfigError("snapshot '" + path.string() + "': first column must be 'x'");
    while (std::getline(header, cell, ',')) snap.columns.push_back(cell);
  }
  if (snap.columns.empty()) throw ConfigError("snapshot '" + path.string() + "' has no observables");
  snap.values.resize(snap.columns.size());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> fields;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        fields.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ConfigError("snapshot '" + path.string() + "' row " + std::to_string(row) +
                          ": bad number '" + cell + "'");
      }
    }
    if (fields.size() != snap.columns.size() + 1) {
      throw ConfigError("snapshot '" + path.string() + "' row " + std::to_string(row) +
                        ": expected " + std::to_string(snap.columns.size() + 1) + " fields");
    }
    if (!snap.x.empty() && !(fields[0] > snap.x.back())) {
      throw ConfigError("snapshot '" + path.string() + "': x must be increasing");
    }
    snap.x.push_back(fields[0]);
    for (std::size_t c = 0; c < snap.columns.size(); ++c) snap.values[c].push_back(fields[c + 1]);
  }
  return snap;
}

int csv_precision_from_env() {
  const char* env = std::getenv("DFLUX_CSV_PRECISION");
  if (env == nullptr || *env == '\0') return 17;
  char* end = nullptr;
  const long p = std::strtol(env, &end, 10);
  if (*end != '\0' || p < 1 || p > 17) {
    throw ConfigError(std::string("DFLUX_CSV_PRECISION must be an integer in 1..17, got '") + env + "'");
  }
  return static_cast<int>(p);
}

std::vector<double> relative_mass_drift(const StateVec& initial, const StateVec& final_mass) {
  std::vector<double> drift(initial.size());
  for (std::size_t i = 0; i < initial.size(); ++i) {
    const double diff = std::abs(final_mass[i] - initial[i]);
    drift[i] = initial[i] != 0.0 ? diff / std::abs(initial[i]) : diff;
  }
  return drift;
}

namespace {

std::string snapshot_name(std::size_t index, double t) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "snapshot_%03zu_t%.10g.csv", index, t);
  return buf;
}

json vec_json(const StateVec& v) { return std::vector<double>(v.begin(), v.end()); }

bool near_equal(const StateVec& a, const StateVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-9 * (1.0 + std::abs(b[i]))) return false;
  }
  return true;
}

void write_manifest(const fs::path& dir, const json& manifest) {
  std::ofstream out(dir / "manifest.json");
  if (!out) throw IoError("cannot write '" + (dir / "manifest.json").string() + "'");
  out << manifest.dump(2) << '\n';
}

}  // namespace

RunResult run(const Scenario& scenario, const RunOptions& options) {
  const auto wall_start = std::chrono::steady_clock::now();
  const DGSolver solver = make_solver(scenario);
  const SystemModel& model = solver.model();
  const Mesh& mesh = solver.mesh();

  if (options.out_dir) {
    std::error_code ec;
    fs::create_directories(*options.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + options.out_dir->string() + "': " + ec.message());
  }

  std::vector<double> snapshot_times = scenario.snapshots;
  if (snapshot_times.empty()) snapshot_times.push_back(scenario.t_end);
  std::sort(snapshot_times.begin(), snapshot_times.end());
  snapshot_times.erase(std::unique(snapshot_times.begin(), snapshot_times.end()), snapshot_times.end());

  std::vector<double> events = snapshot_times;
  events.push_back(scenario.t_end);
  if (scenario.boundary.periodic_from && *scenario.boundary.periodic_from > 0.0 &&
      *scenario.boundary.periodic_from < scenario.t_end) {
    events.push_back(*scenario.boundary.periodic_from);
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  RunResult result;
  result.manifest = {{"scenario", scenario_to_json(scenario)}};
  json snapshot_log = json::array();

  auto record = [&](const DGState& state) {
    ProfileSnapshot snap = make_snapshot(state, mesh, model);
    if (options.out_dir) {
      const fs::path file = *options.out_dir / snapshot_name(result.snapshots.size(), state.time());
      write_snapshot_csv(snap, file, options.precision);
      result.files.push_back(file);
      snapshot_log.push_back({{"time", state.time()}, {"file", file.filename().string()}});
    } else {
      snapshot_log.push_back({{"time", state.time()}});
    }
    result.snapshots.push_back(std::move(snap));
  };

  auto finish_manifest = [&](const DGState& state, const std::string& status) {
    const auto wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    result.wall_seconds = wall;
    result.mass_final = total_mass(state, mesh);
    StateVec residual = result.mass_final - result.mass_initial - result.boundary_inflow;
    std::vector<double> residual_rel(residual.size());
    for (std::size_t i = 0; i < residual.size(); ++i) {
      const double scale = std::max({std::abs(result.mass_initial[i]), std::abs(result.mass_final[i]),
                                     std::abs(result.boundary_inflow[i])});
      residual_rel[i] = scale > 0.0 ? std::abs(residual[i]) / scale : std::abs(residual[i]);
    }
    result.manifest["status"] = status;
    result.manifest["steps"] = result.steps;
    result.manifest["final_time"] = state.time();
    result.manifest["wall_seconds"] = wall;
    result.manifest["snapshots"] = snapshot_log;
    result.manifest["conservation"] = {
        {"mass_initial", vec_json(result.mass_initial)},
        {"mass_final", vec_json(result.mass_final)},
        {"relative_drift", relative_mass_drift(result.mass_initial, result.mass_final)},
        {"boundary_inflow", vec_json(result.boundary_inflow)},
        {"relative_residual_after_boundary_flux", residual_rel},
    };
    result.manifest["edge_cells_constant"] = result.edge_cells_constant;
    if (options.out_dir) write_manifest(*options.out_dir, result.manifest);
  };

  DGState state;
  try {
    state = solver.initialize_primitive(initial_primitive(scenario));
  } catch (const SolverError& e) {
    // No valid state exists yet, so only the manifest is written.
    result.manifest["status"] = "failed";
    result.manifest["error"] = e.what();
    if (options.out_dir) write_manifest(*options.out_dir, result.manifest);
    throw;
  }
  result.mass_initial = total_mass(state, mesh);
  result.boundary_inflow = StateVec(model.n_components());
  const StateVec first0 = state.average(0);
  const StateVec last0 = state.average(mesh.n_cells() - 1);

  std::size_t next_snapshot = 0;
  while (next_snapshot < snapshot_times.size() && snapshot_times[next_snapshot] <= 0.0) {
    record(state);
    ++next_snapshot;
  }

  double t = 0.0;
  try {
    for (double event : events) {
      while (t < event) {
        double dt = solver.stable_dt(state);
        bool land = false;
        if (t + dt >= event) {
          dt = event - t;
          land = true;
        }
        StateVec inflow;
        DGState next = solver.step(state, dt, &inflow);
        t = land ? event : t + dt;
        next.set_time(t);
        state = std::move(next);
        result.boundary_inflow += inflow;
        ++result.steps;
        if (result.edge_cells_constant &&
            (!near_equal(state.average(0), first0) || !near_equal(state.average(mesh.n_cells() - 1), last0))) {
          result.edge_cells_constant = false;
        }
      }
      while (next_snapshot < snapshot_times.size() && snapshot_times[next_snapshot] <= t) {
        record(state);
        ++next_snapshot;
      }
    }
  } catch (const SolverError& e) {
    result.manifest["error"] = e.what();
    if (options.out_dir) {
      write_snapshot_csv(make_snapshot(state, mesh, model), *options.out_dir / "last_valid.csv",
                         options.precision);
    }
    finish_manifest(state, "failed");
    throw;
  }

  finish_manifest(state, "ok");
  result.final_state = std::move(state);
  return result;
}

namespace {

void check_convergence_scenario(const Scenario& base, const std::vector<std::size_t>& meshes) {
  if (meshes.empty()) throw ConfigError("convergence: no mesh sizes given");
  if (!initial_is_smooth(base)) {
    throw ConfigError("convergence: initial data is not smooth, observed orders would be meaningless");
  }
  if (!theta_is_uniform(base)) {
    throw ConfigError("convergence: theta must be uniform for a convergence study");
  }
}

DGState final_state_at(const Scenario& base, std::size_t n) {
  Scenario s = base;
  s.cells = n;
  s.snapshots = {s.t_end};
  return run(s).final_state;
}

/// L1 errors of cell averages against `reference(n, j)`, with orders between
/// consecutive rows.
std::vector<ConvergenceRow> tabulate(const Scenario& base, const std::vector<std::size_t>& meshes,
                                     const std::function<StateVec(std::size_t, std::size_t)>& reference) {
  std::vector<ConvergenceRow> rows;
  for (std::size_t n : meshes) {
    const DGState coarse = final_state_at(base, n);
    const double dx = base.length / static_cast<double>(n);
    double error = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const StateVec ref = reference(n, j);
      for (std::size_t i = 0; i < coarse.n_components(); ++i) error += dx * std::abs(coarse.coeff(j, 0, i) - ref[i]);
    }
    ConvergenceRow row{n, error, std::nullopt};
    if (!rows.empty() && rows.back().l1_error > 0.0 && error > 0.0) {
      row.order = std::log(rows.back().l1_error / error) /
                  std::log(static_cast<double>(n) / static_cast<double>(rows.back().cells));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(const Scenario& base, std::vector<std::size_t> meshes,
                                              std::optional<std::size_t> reference_cells) {
  check_convergence_scenario(base, meshes);
  std::sort(meshes.begin(), meshes.end());
  const std::size_t ref_n = reference_cells.value_or(4 * meshes.back());
  for (std::size_t n : meshes) {
    if (n == 0 || ref_n % n != 0) {
      throw ConfigError("convergence: reference mesh (" + std::to_string(ref_n) +
                        " cells) must be a multiple of every mesh size");
    }
  }
  const DGState reference = final_state_at(base, ref_n);
  return tabulate(base, meshes, [&](std::size_t n, std::size_t j) {
    const std::size_t ratio = ref_n / n;
    StateVec avg(reference.n_components());
    for (std::size_t r = 0; r < ratio; ++r) avg += reference.average(j * ratio + r);
    for (double& v : avg) v /= static_cast<double>(ratio);
    return avg;
  });
}

std::vector<ConvergenceRow> convergence_study_exact(const Scenario& base, std::vector<std::size_t> meshes,
                                                    const ExactCellAverage& exact) {
  check_convergence_scenario(base, meshes);
  std::sort(meshes.begin(), meshes.end());
  if (meshes.front() == 0) throw ConfigError("convergence: mesh sizes must be positive");
  return tabulate(base, meshes, [&](std::size_t n, std::size_t j) {
    const double dx = base.length / static_cast<double>(n);
    return exact(j * dx, (j + 1) * dx);
  });
}

}  // namespace dflux
