#include "dflux/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>

#include "dflux/errors.hpp"

namespace dflux {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  return get<T>(j, key, where);
}

StateVec to_vec(const std::vector<double>& v) {
  if (v.size() > kMaxComponents + 1) throw ConfigError("vector has too many entries");
  StateVec out(v.size());
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

ThetaVec to_theta(const std::vector<double>& v) {
  if (v.size() > ThetaVec::kCapacity) throw ConfigError("theta has too many entries");
  ThetaVec out(v.size());
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

ModelSpec parse_model(const json& j) {
  const std::string where = "model";
  ModelSpec m;
  m.id = get<std::string>(j, "id", where);
  if (m.id == "elastic") {
    check_keys(j, {"id", "beta"}, where);
    m.beta = get_or<double>(j, "beta", 0.3, where);
  } else if (m.id == "traffic") {
    check_keys(j, {"id", "classes", "v_free", "rho_jam"}, where);
    m.classes = get_or<std::size_t>(j, "classes", 3, where);
    m.traffic.v_free = get_or<double>(j, "v_free", 40.0, where);
    m.traffic.rho_jam = get_or<double>(j, "rho_jam", 1.0, where);
  } else {
    throw ConfigError("model.id: unknown model '" + m.id + "'");
  }
  return m;
}

json model_to_json(const ModelSpec& m) {
  if (m.id == "elastic") return {{"id", m.id}, {"beta", m.beta}};
  return {{"id", m.id}, {"classes", m.classes}, {"v_free", m.traffic.v_free},
          {"rho_jam", m.traffic.rho_jam}};
}

ThetaFieldSpec parse_theta(const json& j) {
  const std::string where = "theta";
  const auto kind = get<std::string>(j, "kind", where);
  if (kind == "uniform") {
    check_keys(j, {"kind", "value"}, where);
    return UniformField{get<std::vector<double>>(j, "value", where)};
  }
  if (kind == "two-piece") {
    check_keys(j, {"kind", "x0", "left", "right"}, where);
    return TwoPieceField{get<double>(j, "x0", where), get<std::vector<double>>(j, "left", where),
                         get<std::vector<double>>(j, "right", where)};
  }
  if (kind == "layered") {
    check_keys(j, {"kind", "layers"}, where);
    LayeredField f;
    const json& layers = j.at("layers");
    if (!layers.is_array() || layers.empty()) throw ConfigError("theta.layers: expected a non-empty array");
    for (const json& l : layers) {
      check_keys(l, {"width", "value"}, "theta.layers[]");
      f.layers.push_back({get<double>(l, "width", "theta.layers[]"),
                          get<std::vector<double>>(l, "value", "theta.layers[]")});
    }
    return f;
  }
  if (kind == "cells") {
    check_keys(j, {"kind", "values"}, where);
    return CellsField{get<std::vector<std::vector<double>>>(j, "values", where)};
  }
  throw ConfigError("theta.kind: unknown field kind '" + kind + "'");
}

InitialSpec parse_initial(const json& j) {
  const std::string where = "initial";
  const auto kind = get<std::string>(j, "kind", where);
  if (kind == "uniform") {
    check_keys(j, {"kind", "value"}, where);
    return UniformField{get<std::vector<double>>(j, "value", where)};
  }
  if (kind == "two-piece") {
    check_keys(j, {"kind", "x0", "left", "right"}, where);
    return TwoPieceField{get<double>(j, "x0", where), get<std::vector<double>>(j, "left", where),
                         get<std::vector<double>>(j, "right", where)};
  }
  if (kind == "sine") {
    check_keys(j, {"kind", "mean", "amplitude", "periods"}, where);
    return SineField{get<std::vector<double>>(j, "mean", where),
                     get<std::vector<double>>(j, "amplitude", where),
                     get_or<double>(j, "periods", 1.0, where)};
  }
  if (kind == "gaussian") {
    check_keys(j, {"kind", "base", "amplitude", "center", "width"}, where);
    return GaussianField{get<std::vector<double>>(j, "base", where),
                         get<std::vector<double>>(j, "amplitude", where),
                         get<double>(j, "center", where), get<double>(j, "width", where)};
  }
  throw ConfigError("initial.kind: unknown kind '" + kind + "'");
}

struct FieldToJson {
  json operator()(const UniformField& f) const { return {{"kind", "uniform"}, {"value", f.value}}; }
  json operator()(const TwoPieceField& f) const {
    return {{"kind", "two-piece"}, {"x0", f.x0}, {"left", f.left}, {"right", f.right}};
  }
  json operator()(const LayeredField& f) const {
    json layers = json::array();
    for (const auto& l : f.layers) layers.push_back({{"width", l.width}, {"value", l.value}});
    return {{"kind", "layered"}, {"layers", layers}};
  }
  json operator()(const CellsField& f) const { return {{"kind", "cells"}, {"values", f.values}}; }
  json operator()(const SineField& f) const {
    return {{"kind", "sine"}, {"mean", f.mean}, {"amplitude", f.amplitude}, {"periods", f.periods}};
  }
  json operator()(const GaussianField& f) const {
    return {{"kind", "gaussian"}, {"base", f.base}, {"amplitude", f.amplitude},
            {"center", f.center}, {"width", f.width}};
  }
};

BoundarySideSpec parse_side(const json& j, const std::string& where) {
  BoundarySideSpec s;
  const auto kind = get<std::string>(j, "kind", where);
  if (kind == "periodic") {
    check_keys(j, {"kind"}, where);
    s.kind = BoundarySideKind::kPeriodic;
  } else if (kind == "outflow") {
    check_keys(j, {"kind"}, where);
    s.kind = BoundarySideKind::kOutflow;
  } else if (kind == "state") {
    check_keys(j, {"kind", "value"}, where);
    s.kind = BoundarySideKind::kState;
    s.value = get<std::vector<double>>(j, "value", where);
  } else if (kind == "velocity-pulse") {
    check_keys(j, {"kind", "amplitude", "t_center", "t_half"}, where);
    s.kind = BoundarySideKind::kVelocityPulse;
    s.pulse.amplitude = get_or<double>(j, "amplitude", 0.2, where);
    s.pulse.t_center = get_or<double>(j, "t_center", 30.0, where);
    s.pulse.t_half = get_or<double>(j, "t_half", 30.0, where);
    if (!(s.pulse.t_half > 0.0)) throw ConfigError(where + ".t_half must be positive");
  } else {
    throw ConfigError(where + ".kind: unknown boundary kind '" + kind + "'");
  }
  return s;
}

json side_to_json(const BoundarySideSpec& s) {
  switch (s.kind) {
    case BoundarySideKind::kPeriodic:
      return {{"kind", "periodic"}};
    case BoundarySideKind::kOutflow:
      return {{"kind", "outflow"}};
    case BoundarySideKind::kState:
      return {{"kind", "state"}, {"value", s.value}};
    case BoundarySideKind::kVelocityPulse:
      return {{"kind", "velocity-pulse"},
              {"amplitude", s.pulse.amplitude},
              {"t_center", s.pulse.t_center},
              {"t_half", s.pulse.t_half}};
  }
  return {};
}

void require_size(const std::vector<double>& v, std::size_t n, const std::string& what) {
  if (v.size() != n) {
    throw ConfigError(what + ": expected " + std::to_string(n) + " entries, got " +
                      std::to_string(v.size()));
  }
}

std::size_t primitive_size(const ModelSpec& m) { return m.id == "elastic" ? 2 : m.classes; }
std::size_t theta_size(const ModelSpec& m) { return m.id == "elastic" ? 2 : m.classes + 1; }

}  // namespace

Scenario scenario_from_json(const json& j) {
  check_keys(j, {"name", "model", "mesh", "theta", "initial", "boundary", "degree", "flux", "courant",
                 "dt_max", "t_end", "snapshots"},
             "scenario");
  Scenario s;
  s.name = get_or<std::string>(j, "name", "unnamed", "scenario");
  if (!j.contains("model")) throw ConfigError("scenario: missing key 'model'");
  s.model = parse_model(j.at("model"));

  if (!j.contains("mesh")) throw ConfigError("scenario: missing key 'mesh'");
  const json& mesh = j.at("mesh");
  check_keys(mesh, {"length", "cells"}, "mesh");
  s.length = get<double>(mesh, "length", "mesh");
  const auto cells = get<long long>(mesh, "cells", "mesh");
  if (cells <= 0) throw ConfigError("mesh.cells must be positive");
  s.cells = static_cast<std::size_t>(cells);

  if (!j.contains("theta")) throw ConfigError("scenario: missing key 'theta'");
  s.theta = parse_theta(j.at("theta"));
  if (!j.contains("initial")) throw ConfigError("scenario: missing key 'initial'");
  s.initial = parse_initial(j.at("initial"));

  if (j.contains("boundary")) {
    const json& b = j.at("boundary");
    check_keys(b, {"left", "right", "periodic_from"}, "boundary");
    if (b.contains("left")) s.boundary.left = parse_side(b.at("left"), "boundary.left");
    if (b.contains("right")) s.boundary.right = parse_side(b.at("right"), "boundary.right");
    if (b.contains("periodic_from")) s.boundary.periodic_from = get<double>(b, "periodic_from", "boundary");
  }

  s.degree = get_or<int>(j, "degree", 1, "scenario");
  if (j.contains("flux")) {
    const json& f = j.at("flux");
    check_keys(f, {"solver", "theta_bar", "delta_mapping"}, "flux");
    s.flux.solver = parse_classical_solver(get_or<std::string>(f, "solver", "llf", "flux"));
    s.flux.theta_bar = parse_theta_bar_rule(get_or<std::string>(f, "theta_bar", "right", "flux"));
    s.flux.delta_mapping = get_or<bool>(f, "delta_mapping", true, "flux");
  }
  s.courant = get_or<double>(j, "courant", 1.0 / (2.0 * s.degree + 1.0), "scenario");
  s.dt_max = get_or<double>(j, "dt_max", 1e30, "scenario");
  s.t_end = get<double>(j, "t_end", "scenario");
  s.snapshots = get_or<std::vector<double>>(j, "snapshots", {}, "scenario");
  s.validate();
  return s;
}

json scenario_to_json(const Scenario& s) {
  json boundary = {{"left", side_to_json(s.boundary.left)}, {"right", side_to_json(s.boundary.right)}};
  if (s.boundary.periodic_from) boundary["periodic_from"] = *s.boundary.periodic_from;
  json j = {
      {"name", s.name},
      {"model", model_to_json(s.model)},
      {"mesh", {{"length", s.length}, {"cells", s.cells}}},
      {"theta", std::visit(FieldToJson{}, s.theta)},
      {"initial", std::visit(FieldToJson{}, s.initial)},
      {"boundary", boundary},
      {"degree", s.degree},
      {"flux",
       {{"solver", to_string(s.flux.solver)},
        {"theta_bar", to_string(s.flux.theta_bar)},
        {"delta_mapping", s.flux.delta_mapping}}},
      {"courant", s.courant},
      {"t_end", s.t_end},
      {"snapshots", s.snapshots},
  };
  if (s.dt_max < 1e30) j["dt_max"] = s.dt_max;
  return j;
}

Scenario load_scenario(const std::string& source) {
  constexpr std::string_view kBuiltin = "builtin:";
  if (source.rfind(kBuiltin, 0) == 0) return builtin_scenario(source.substr(kBuiltin.size()));
  std::ifstream in(source);
  if (!in) throw IoError("cannot open config file '" + source + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + source + "' is not valid JSON: " + e.what());
  }
  return scenario_from_json(j);
}

std::shared_ptr<SystemModel> make_model(const ModelSpec& spec) {
  if (spec.id == "elastic") return std::make_shared<ElasticModel>(spec.beta);
  if (spec.id == "traffic") return std::make_shared<TrafficModel>(spec.classes, spec.traffic);
  throw ConfigError("unknown model '" + spec.id + "'");
}

Mesh make_mesh(const Scenario& s) {
  const std::size_t nt = theta_size(s.model);
  struct Visitor {
    const Scenario& s;
    std::size_t nt;
    std::vector<ThetaVec> operator()(const UniformField& f) const {
      require_size(f.value, nt, "theta.value");
      return std::vector<ThetaVec>(s.cells, to_theta(f.value));
    }
    std::vector<ThetaVec> operator()(const TwoPieceField& f) const {
      require_size(f.left, nt, "theta.left");
      require_size(f.right, nt, "theta.right");
      std::vector<ThetaVec> out(s.cells);
      const double dx = s.length / static_cast<double>(s.cells);
      for (std::size_t j = 0; j < s.cells; ++j) {
        out[j] = to_theta((static_cast<double>(j) + 0.5) * dx < f.x0 ? f.left : f.right);
      }
      return out;
    }
    std::vector<ThetaVec> operator()(const LayeredField& f) const {
      double period = 0.0;
      for (const auto& l : f.layers) {
        require_size(l.value, nt, "theta.layers[].value");
        if (!(l.width > 0.0)) throw ConfigError("theta.layers[].width must be positive");
        period += l.width;
      }
      std::vector<ThetaVec> out(s.cells);
      const double dx = s.length / static_cast<double>(s.cells);
      for (std::size_t j = 0; j < s.cells; ++j) {
        const double x = (static_cast<double>(j) + 0.5) * dx;
        double pos = std::fmod(x, period);
        std::size_t layer = 0;
        while (layer + 1 < f.layers.size() && pos >= f.layers[layer].width) {
          pos -= f.layers[layer].width;
          ++layer;
        }
        out[j] = to_theta(f.layers[layer].value);
      }
      return out;
    }
    std::vector<ThetaVec> operator()(const CellsField& f) const {
      if (f.values.size() != s.cells) {
        throw ConfigError("theta.values: expected one entry per cell (" + std::to_string(s.cells) + ")");
      }
      std::vector<ThetaVec> out;
      for (const auto& v : f.values) {
        require_size(v, nt, "theta.values[]");
        out.push_back(to_theta(v));
      }
      return out;
    }
  };
  return Mesh(s.length, s.cells, std::visit(Visitor{s, nt}, s.theta));
}

std::function<StateVec(double)> initial_primitive(const Scenario& s) {
  const std::size_t np = primitive_size(s.model);
  const double length = s.length;
  struct Visitor {
    std::size_t np;
    double length;
    std::function<StateVec(double)> operator()(const UniformField& f) const {
      require_size(f.value, np, "initial.value");
      const StateVec v = to_vec(f.value);
      return [v](double) { return v; };
    }
    std::function<StateVec(double)> operator()(const TwoPieceField& f) const {
      require_size(f.left, np, "initial.left");
      require_size(f.right, np, "initial.right");
      const StateVec l = to_vec(f.left);
      const StateVec r = to_vec(f.right);
      const double x0 = f.x0;
      return [l, r, x0](double x) { return x < x0 ? l : r; };
    }
    std::function<StateVec(double)> operator()(const SineField& f) const {
      require_size(f.mean, np, "initial.mean");
      require_size(f.amplitude, np, "initial.amplitude");
      const StateVec mean = to_vec(f.mean);
      const StateVec amp = to_vec(f.amplitude);
      const double k = 2.0 * std::numbers::pi * f.periods / length;
      return [mean, amp, k](double x) { return mean + std::sin(k * x) * amp; };
    }
    std::function<StateVec(double)> operator()(const GaussianField& f) const {
      require_size(f.base, np, "initial.base");
      require_size(f.amplitude, np, "initial.amplitude");
      if (!(f.width > 0.0)) throw ConfigError("initial.width must be positive");
      const StateVec base = to_vec(f.base);
      const StateVec amp = to_vec(f.amplitude);
      const double c = f.center;
      const double w = f.width;
      return [base, amp, c, w](double x) {
        const double z = (x - c) / w;
        return base + std::exp(-z * z) * amp;
      };
    }
  };
  return std::visit(Visitor{np, length}, s.initial);
}

BoundarySpec make_boundary(const Scenario& s, const SystemModel& model) {
  auto side = [&](const BoundarySideSpec& spec, const char* where) {
    BoundarySide out;
    switch (spec.kind) {
      case BoundarySideKind::kPeriodic:
        out.kind = BoundaryKind::kPeriodic;
        break;
      case BoundarySideKind::kOutflow:
        out.kind = BoundaryKind::kOutflow;
        break;
      case BoundarySideKind::kState: {
        require_size(spec.value, primitive_size(s.model), std::string("boundary.") + where + ".value");
        out.kind = BoundaryKind::kPrescribed;
        const StateVec prim = to_vec(spec.value);
        const SystemModel* m = &model;
        out.exterior = [prim, m](double, const StateVec&, const ThetaVec& theta) {
          return m->from_primitive(prim, theta);
        };
        break;
      }
      case BoundarySideKind::kVelocityPulse: {
        if (s.model.id != "elastic") {
          throw ConfigError(std::string("boundary.") + where + ": velocity-pulse needs the elastic model");
        }
        out.kind = BoundaryKind::kPrescribed;
        const VelocityPulse pulse = spec.pulse;
        // Strain copied from the interior, velocity prescribed.
        out.exterior = [pulse](double t, const StateVec& interior, const ThetaVec& theta) {
          return StateVec{interior[0], theta[0] * pulse(t)};
        };
        break;
      }
    }
    return out;
  };
  BoundarySpec bc;
  bc.left = side(s.boundary.left, "left");
  bc.right = side(s.boundary.right, "right");
  bc.periodic_from = s.boundary.periodic_from;
  bc.validate();
  return bc;
}

DGSolver make_solver(const Scenario& s) {
  auto model = make_model(s.model);
  Mesh mesh = make_mesh(s);
  BoundarySpec bc = make_boundary(s, *model);
  return DGSolver(model, std::move(mesh), std::move(bc), s.degree, s.flux,
                  CourantConfig{s.courant, s.dt_max});
}

void Scenario::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) throw ConfigError("mesh.length must be positive");
  if (cells == 0) throw ConfigError("mesh.cells must be positive");
  if (degree < 0 || degree > kMaxDegree) throw ConfigError("degree must be 0, 1 or 2");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be >= 0");
  for (double t : snapshots) {
    if (!(t >= 0.0) || t > t_end) throw ConfigError("snapshot time " + std::to_string(t) + " outside [0, t_end]");
  }
  // Building the pieces runs every per-module check.
  (void)make_solver(*this);
  (void)initial_primitive(*this);
}

bool theta_is_uniform(const Scenario& s) {
  const Mesh mesh = make_mesh(s);
  for (std::size_t j = 1; j < mesh.n_cells(); ++j) {
    if (!(mesh.theta(j) == mesh.theta(0))) return false;
  }
  return true;
}

bool initial_is_smooth(const Scenario& s) {
  return !std::holds_alternative<TwoPieceField>(s.initial);
}

std::vector<std::string> builtin_names() { return {"4a", "4b", "5a", "5b", "elastic-layered"}; }

Scenario builtin_scenario(std::string_view name) {
  if (name == "elastic-layered") return elastic_layered_scenario();
  if (name == "4a" || name == "4b" || name == "5a" || name == "5b") return traffic_riemann_scenario(name);
  throw ConfigError("unknown built-in scenario '" + std::string(name) + "'");
}

Scenario traffic_riemann_scenario(std::string_view case_id) {
  struct Case {
    std::string_view id;
    double x0_fraction;
    double lane_ratio;  // r = a^L / a^R
    std::vector<double> rho_left;
    std::vector<double> rho_right;
    ThetaBarRule rule;
  };
  static const std::vector<Case> kCases = {
      {"4a", 0.3, 2.0, {0.02, 0.03, 0.01}, {0.2, 0.08, 0.15}, ThetaBarRule::kRight},
      {"4b", 0.5, 3.0, {0.15, 0.05, 0.02}, {0.2, 0.15, 0.35}, ThetaBarRule::kLeft},
      {"5a", 0.4, 3.0, {0.1, 0.15, 0.05}, {0.15, 0.1, 0.2}, ThetaBarRule::kLeft},
      {"5b", 0.45, 0.4, {0.1, 0.2, 0.3}, {0.1, 0.25, 0.2}, ThetaBarRule::kLeft},
  };
  const auto it = std::find_if(kCases.begin(), kCases.end(), [&](const Case& c) { return c.id == case_id; });
  if (it == kCases.end()) throw ConfigError("unknown traffic Riemann case '" + std::string(case_id) + "'");

  Scenario s;
  s.name = "traffic-" + std::string(case_id);
  s.model.id = "traffic";
  s.model.classes = 3;
  s.model.traffic = TrafficParams{40.0, 1.0};
  s.length = 10000.0;
  s.cells = 800;
  const double x0 = it->x0_fraction * s.length;
  // a^R = 1 lane-unit, a^L = r.
  s.theta = TwoPieceField{x0, {it->lane_ratio, 0.5, 0.75, 1.0}, {1.0, 0.25, 0.375, 0.5}};
  s.initial = TwoPieceField{x0, it->rho_left, it->rho_right};
  s.boundary = BoundaryConfig{};
  s.degree = 1;
  s.flux = FluxConfig{ClassicalSolver::kLocalLaxFriedrichs, it->rule, true};
  s.courant = 0.3;
  s.t_end = 400.0;
  s.snapshots = {400.0};
  return s;
}

Scenario elastic_layered_scenario(std::size_t cells_per_unit) {
  if (cells_per_unit < 2) throw ConfigError("elastic layered scenario needs >= 2 cells per unit layer");
  Scenario s;
  s.name = "elastic-layered";
  s.model.id = "elastic";
  s.model.beta = 0.3;
  s.length = 300.0;
  s.cells = 300 * cells_per_unit;
  s.theta = LayeredField{{{1.0, {1.0, 1.0}}, {1.0, {3.0, 3.0}}}};
  s.initial = UniformField{{0.0, 0.0}};
  s.boundary.left.kind = BoundarySideKind::kVelocityPulse;
  s.boundary.left.pulse = VelocityPulse{0.2, 30.0, 30.0};
  s.boundary.right.kind = BoundarySideKind::kOutflow;
  s.boundary.periodic_from = 70.0;
  s.degree = 1;
  s.flux = FluxConfig{ClassicalSolver::kLocalLaxFriedrichs, ThetaBarRule::kRight, true};
  s.courant = 1.0 / 3.0;
  s.t_end = 2850.0;
  s.snapshots = {120.0, 240.0, 840.0, 1500.0, 2850.0};
  return s;
}

}  // namespace dflux
