// Command-line driver: run scenarios, convergence studies and wave analysis.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dflux/errors.hpp"
#include "dflux/runner.hpp"
#include "dflux/scenario.hpp"
#include "dflux/waves.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kSolver = 2, kIo = 3 };

std::vector<std::size_t> parse_meshes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw dflux::ConfigError("--meshes: '" + item + "' is not a positive integer");
    }
  }
  if (out.empty()) throw dflux::ConfigError("--meshes: empty list");
  return out;
}

int cmd_run(const std::string& config, const std::string& out_dir) {
  const dflux::Scenario s = dflux::load_scenario(config);
  dflux::RunOptions opts;
  opts.out_dir = out_dir.empty() ? std::filesystem::path("runs") / s.name : std::filesystem::path(out_dir);
  opts.precision = dflux::csv_precision_from_env();
  const dflux::RunResult r = dflux::run(s, opts);
  std::printf("%s: %zu steps in %.2f s\n", s.name.c_str(), r.steps, r.wall_seconds);
  for (const auto& f : r.files) std::printf("  wrote %s\n", f.string().c_str());
  const auto drift = dflux::relative_mass_drift(r.mass_initial, r.mass_final);
  std::printf("  mass drift:");
  for (double d : drift) std::printf(" %.3e", d);
  std::printf("\n");
  if (!r.edge_cells_constant) std::printf("  note: waves reached the domain edges\n");
  return kOk;
}

int cmd_convergence(const std::string& config, const std::string& meshes, std::size_t reference) {
  const dflux::Scenario s = dflux::load_scenario(config);
  std::optional<std::size_t> ref;
  if (reference > 0) ref = reference;
  const auto rows = dflux::convergence_study(s, parse_meshes(meshes), ref);
  std::printf("%8s  %14s  %8s\n", "N", "L1 error", "order");
  for (const auto& row : rows) {
    if (row.order) {
      std::printf("%8zu  %14.6e  %8.4f\n", row.cells, row.l1_error, *row.order);
    } else {
      std::printf("%8zu  %14.6e  %8s\n", row.cells, row.l1_error, "-");
    }
  }
  return kOk;
}

int cmd_analyze(const std::string& csv, double x0_fraction, const dflux::WaveThresholds& th) {
  const dflux::ProfileSnapshot snap = dflux::read_snapshot_csv(csv);
  if (snap.rows() < 2) throw dflux::ConfigError("analyze: snapshot needs at least two rows");
  const double dx = snap.x[1] - snap.x[0];
  const double length = snap.x.back() + 0.5 * dx - (snap.x.front() - 0.5 * dx);
  const double x0 = snap.x.front() - 0.5 * dx + x0_fraction * length;
  const dflux::WaveReport rep = dflux::analyze_waves(snap, x0, th);
  std::printf("waves: %zu%s\n", rep.waves.size(), rep.conclusive ? "" : " (inconclusive)");
  for (const auto& w : rep.waves) {
    std::printf("  [%.6g, %.6g] %s\n", w.left_edge, w.right_edge, std::string(dflux::to_string(w.type)).c_str());
  }
  return kOk;
}

int cmd_list_builtin(const std::string& write_dir) {
  for (const auto& name : dflux::builtin_names()) {
    std::printf("%s\n", name.c_str());
    if (write_dir.empty()) continue;
    std::error_code ec;
    std::filesystem::create_directories(write_dir, ec);
    if (ec) throw dflux::IoError("cannot create '" + write_dir + "': " + ec.message());
    const auto path = std::filesystem::path(write_dir) / (name + ".json");
    std::ofstream out(path);
    if (!out) throw dflux::IoError("cannot write '" + path.string() + "'");
    out << dflux::scenario_to_json(dflux::builtin_scenario(name)).dump(2) << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runge-Kutta DG solver for conservation laws with discontinuous flux"};
  app.require_subcommand(1);

  std::string config, out_dir, meshes, csv, write_dir;
  std::size_t reference = 0;
  double x0 = 0.0;
  dflux::WaveThresholds th;

  auto* run = app.add_subcommand("run", "Run a scenario (JSON file or builtin:NAME)");
  run->add_option("config", config, "Scenario file or builtin:NAME")->required();
  run->add_option("--out", out_dir, "Output directory (default runs/<name>)");

  auto* conv = app.add_subcommand("convergence", "Self-convergence study of cell averages");
  conv->add_option("config", config, "Scenario file or builtin:NAME")->required();
  conv->add_option("--meshes", meshes, "Comma-separated cell counts")->required();
  conv->add_option("--reference", reference, "Reference cell count (default 4x the finest)");

  auto* analyze = app.add_subcommand("analyze", "Count waves in a traffic snapshot");
  analyze->add_option("csv", csv, "Snapshot CSV")->required();
  analyze->add_option("--x0", x0, "Parameter jump position as a fraction of the domain")->required();
  analyze->add_option("--plateau-tol", th.plateau_tol, "Flatness tolerance on total density");
  analyze->add_option("--fan-width", th.fan_width, "Minimum fan width in cells");
  analyze->add_option("--flat-window", th.flat_window, "Odd window (cells) over which flatness is measured");

  auto* list = app.add_subcommand("list-builtin", "List built-in scenarios");
  list->add_option("--write", write_dir, "Also write each one as a JSON config into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(config, out_dir);
    if (*conv) return cmd_convergence(config, meshes, reference);
    if (*analyze) return cmd_analyze(csv, x0, th);
    if (*list) return cmd_list_builtin(write_dir);
  } catch (const dflux::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const dflux::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const dflux::Error& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}
