#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "dflux/flux_delta.hpp"
#include "dflux/model_elastic.hpp"
#include "dflux/model_traffic.hpp"
#include "dflux/solver.hpp"

namespace dflux {

struct ModelSpec {
  std::string id = "traffic";  // "traffic" | "elastic"
  double beta = 0.3;           // elastic
  std::size_t classes = 3;     // traffic
  TrafficParams traffic;       // traffic
};

// Parameter fields and initial data. Values are theta vectors for the parameter
// field and primitive variables for initial data (elastic: eps, v; traffic:
// per-lane class densities).
struct UniformField {
  std::vector<double> value;
};
struct TwoPieceField {
  double x0 = 0.0;
  std::vector<double> left;
  std::vector<double> right;
};
struct Layer {
  double width = 1.0;
  std::vector<double> value;
};
/// Layers repeated periodically from x = 0.
struct LayeredField {
  std::vector<Layer> layers;
};
struct CellsField {
  std::vector<std::vector<double>> values;
};
/// mean + amplitude * sin(2 pi periods x / L).
struct SineField {
  std::vector<double> mean;
  std::vector<double> amplitude;
  double periods = 1.0;
};
/// base + amplitude * exp(-((x - center) / width)^2).
struct GaussianField {
  std::vector<double> base;
  std::vector<double> amplitude;
  double center = 0.0;
  double width = 1.0;
};

using ThetaFieldSpec = std::variant<UniformField, TwoPieceField, LayeredField, CellsField>;
using InitialSpec = std::variant<UniformField, TwoPieceField, SineField, GaussianField>;

enum class BoundarySideKind { kPeriodic, kOutflow, kState, kVelocityPulse };

struct BoundarySideSpec {
  BoundarySideKind kind = BoundarySideKind::kOutflow;
  std::vector<double> value;  // kState: primitive exterior state
  VelocityPulse pulse;        // kVelocityPulse (elastic only)
};

struct BoundaryConfig {
  BoundarySideSpec left;
  BoundarySideSpec right;
  std::optional<double> periodic_from;
};

struct Scenario {
  std::string name = "unnamed";
  ModelSpec model;
  double length = 1.0;
  std::size_t cells = 100;
  ThetaFieldSpec theta = UniformField{};
  InitialSpec initial = UniformField{};
  BoundaryConfig boundary;
  int degree = 1;
  FluxConfig flux;
  double courant = 1.0 / 3.0;
  double dt_max = 1e30;
  double t_end = 0.0;
  std::vector<double> snapshots;

  /// Throws ConfigError on any inconsistency (builds the model and mesh to check).
  void validate() const;
};

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);

/// Reads a JSON config file, or a built-in scenario when `source` has the form
/// "builtin:<name>". Throws ConfigError / IoError.
Scenario load_scenario(const std::string& source);

std::shared_ptr<SystemModel> make_model(const ModelSpec& spec);
Mesh make_mesh(const Scenario& s);
BoundarySpec make_boundary(const Scenario& s, const SystemModel& model);
std::function<StateVec(double)> initial_primitive(const Scenario& s);
DGSolver make_solver(const Scenario& s);

/// True when theta is the same in every cell.
bool theta_is_uniform(const Scenario& s);
bool initial_is_smooth(const Scenario& s);

// Built-in scenarios.
std::vector<std::string> builtin_names();
Scenario builtin_scenario(std::string_view name);
/// Multi-class Riemann problems "4a", "4b", "5a", "5b".
Scenario traffic_riemann_scenario(std::string_view case_id);
/// Alternating (1,1)/(3,3) unit layers on [0, 300] forced from the left.
Scenario elastic_layered_scenario(std::size_t cells_per_unit = 8);

}  // namespace dflux
