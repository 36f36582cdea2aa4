// Python bindings: scenario runs, wave analysis and the flux mappings.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dflux/errors.hpp"
#include "dflux/flux_delta.hpp"
#include "dflux/model_elastic.hpp"
#include "dflux/model_traffic.hpp"
#include "dflux/runner.hpp"
#include "dflux/scenario.hpp"
#include "dflux/waves.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

template <class V>
V to_fixed(const std::vector<double>& v, const char* what) {
  if (v.size() > V::kCapacity) throw dflux::ConfigError(std::string(what) + ": too many entries");
  return V(std::span<const double>(v));
}

dflux::Scenario parse(const std::string& config_json) {
  json j;
  try {
    j = json::parse(config_json);
  } catch (const json::exception& e) {
    throw dflux::ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  return dflux::scenario_from_json(j);
}

py::dict snapshot_dict(const dflux::ProfileSnapshot& s) {
  py::array_t<double> values({s.columns.size(), s.rows()});
  auto v = values.mutable_unchecked<2>();
  for (std::size_t c = 0; c < s.columns.size(); ++c) {
    for (std::size_t j = 0; j < s.rows(); ++j) v(c, j) = s.values[c][j];
  }
  py::dict d;
  d["time"] = s.time;
  d["columns"] = s.columns;
  d["x"] = py::array_t<double>(s.x.size(), s.x.data());
  d["values"] = values;
  return d;
}

py::dict run(const std::string& config_json, std::optional<std::string> out_dir, int precision) {
  const dflux::Scenario s = parse(config_json);
  dflux::RunOptions opts;
  if (out_dir) opts.out_dir = *out_dir;
  opts.precision = precision;
  dflux::RunResult r;
  {
    py::gil_scoped_release release;
    r = dflux::run(s, opts);
  }
  py::list snaps;
  for (const auto& snap : r.snapshots) snaps.append(snapshot_dict(snap));
  py::dict d;
  d["snapshots"] = snaps;
  d["steps"] = r.steps;
  d["manifest"] = r.manifest.dump();
  return d;
}

py::dict analyze(const std::vector<double>& x, const std::vector<std::vector<double>>& columns, double x0,
                 double plateau_tol, std::size_t fan_width, std::size_t flat_window, std::size_t min_plateau) {
  dflux::ProfileSnapshot s;
  s.x = x;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != x.size()) throw dflux::ConfigError("analyze_waves: column length differs from x");
    s.columns.push_back("c" + std::to_string(c));
    s.values.push_back(columns[c]);
  }
  dflux::WaveThresholds th;
  th.plateau_tol = plateau_tol;
  th.fan_width = fan_width;
  th.flat_window = flat_window;
  th.min_plateau = min_plateau;
  const dflux::WaveReport rep = dflux::analyze_waves(s, x0, th);
  py::list out;
  for (const auto& w : rep.waves) {
    out.append(py::make_tuple(w.left_edge, w.right_edge, std::string(dflux::to_string(w.type))));
  }
  py::dict d;
  d["conclusive"] = rep.conclusive;
  d["waves"] = out;
  return d;
}

dflux::MapSide parse_side(const std::string& side) {
  if (side == "demand") return dflux::MapSide::kDemand;
  if (side == "supply") return dflux::MapSide::kSupply;
  throw dflux::ConfigError("side must be 'demand' or 'supply'");
}

py::tuple map_traffic(const std::vector<double>& u, const std::vector<double>& theta_from,
                      const std::vector<double>& theta_to, const std::string& side, double v_free,
                      double rho_jam) {
  const dflux::TrafficModel model(u.size(), dflux::TrafficParams{v_free, rho_jam});
  model.validate_theta(to_fixed<dflux::ThetaVec>(theta_from, "theta_from"));
  model.validate_theta(to_fixed<dflux::ThetaVec>(theta_to, "theta_to"));
  const auto r = dflux::delta_map(model, to_fixed<dflux::StateVec>(u, "u"),
                                  to_fixed<dflux::ThetaVec>(theta_from, "theta_from"),
                                  to_fixed<dflux::ThetaVec>(theta_to, "theta_to"), parse_side(side));
  return py::make_tuple(std::vector<double>(r.state.begin(), r.state.end()), r.gamma);
}

py::tuple map_elastic(const std::vector<double>& u, const std::vector<double>& theta_from,
                      const std::vector<double>& theta_to, double beta) {
  const dflux::ElasticModel model(beta);
  if (u.size() != 2) throw dflux::ConfigError("elastic state is (eps, q)");
  model.validate_theta(to_fixed<dflux::ThetaVec>(theta_from, "theta_from"));
  model.validate_theta(to_fixed<dflux::ThetaVec>(theta_to, "theta_to"));
  const auto r = dflux::delta_map(model, to_fixed<dflux::StateVec>(u, "u"),
                                  to_fixed<dflux::ThetaVec>(theta_from, "theta_from"),
                                  to_fixed<dflux::ThetaVec>(theta_to, "theta_to"), dflux::MapSide::kDemand);
  return py::make_tuple(std::vector<double>(r.state.begin(), r.state.end()), r.gamma);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "RKDG solver for conservation laws with discontinuous flux";

  static py::exception<dflux::Error> base(m, "DfluxError", PyExc_RuntimeError);
  static py::exception<dflux::ConfigError> config(m, "ConfigError", base.ptr());
  static py::exception<dflux::SolverError> solver(m, "SolverError", base.ptr());
  static py::exception<dflux::InadmissibleState> inadmissible(m, "InadmissibleState", base.ptr());
  static py::exception<dflux::MappingInfeasible> infeasible(m, "MappingInfeasible", base.ptr());
  static py::exception<dflux::IoError> io(m, "IoError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const dflux::ConfigError& e) {
      py::set_error(config, e.what());
    } catch (const dflux::SolverError& e) {
      py::set_error(solver, e.what());
    } catch (const dflux::InadmissibleState& e) {
      py::set_error(inadmissible, e.what());
    } catch (const dflux::MappingInfeasible& e) {
      py::set_error(infeasible, e.what());
    } catch (const dflux::IoError& e) {
      py::set_error(io, e.what());
    } catch (const dflux::Error& e) {
      py::set_error(base, e.what());
    }
  });

  m.def("builtin_names", &dflux::builtin_names);
  m.def("builtin_scenario_json", [](const std::string& name) {
    return dflux::scenario_to_json(dflux::builtin_scenario(name)).dump();
  });
  m.def("normalize_scenario_json", [](const std::string& config) {
    return dflux::scenario_to_json(parse(config)).dump();
  }, "Validate a scenario and return it with defaults filled in.");
  m.def("run", &run, py::arg("config_json"), py::arg("out_dir") = py::none(), py::arg("precision") = 17);
  m.def("convergence", [](const std::string& config, std::vector<std::size_t> meshes, std::size_t reference) {
    std::optional<std::size_t> ref;
    if (reference > 0) ref = reference;
    std::vector<dflux::ConvergenceRow> rows;
    {
      const dflux::Scenario s = parse(config);
      py::gil_scoped_release release;
      rows = dflux::convergence_study(s, std::move(meshes), ref);
    }
    py::list out;
    for (const auto& r : rows) {
      out.append(py::make_tuple(r.cells, r.l1_error, r.order ? py::cast(*r.order) : py::none()));
    }
    return out;
  }, py::arg("config_json"), py::arg("meshes"), py::arg("reference") = 0);
  m.def("analyze_waves", &analyze, py::arg("x"), py::arg("columns"), py::arg("x0"),
        py::arg("plateau_tol") = 1e-3, py::arg("fan_width") = 12, py::arg("flat_window") = 5,
        py::arg("min_plateau") = 3);
  m.def("delta_map_traffic", &map_traffic, py::arg("u"), py::arg("theta_from"), py::arg("theta_to"),
        py::arg("side") = "demand", py::arg("v_free") = 40.0, py::arg("rho_jam") = 1.0);
  m.def("delta_map_elastic", &map_elastic, py::arg("u"), py::arg("theta_from"), py::arg("theta_to"),
        py::arg("beta") = 0.3);
  m.def("elastic_stress", &dflux::elastic_stress, py::arg("eps"), py::arg("modulus"), py::arg("beta") = 0.3);
}
