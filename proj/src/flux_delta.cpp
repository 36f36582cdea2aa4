#include "dflux/flux_delta.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dflux/errors.hpp"

namespace dflux {

void FluxConfig::validate(const SystemModel& model) const {
  if (solver == ClassicalSolver::kGodunovScalar && model.n_components() != 1) {
    throw ConfigError("godunov-scalar flux requires a scalar model, got " +
                      std::to_string(model.n_components()) + " components");
  }
}

ClassicalSolver parse_classical_solver(std::string_view name) {
  if (name == "llf" || name == "local-lax-friedrichs") return ClassicalSolver::kLocalLaxFriedrichs;
  if (name == "godunov-scalar") return ClassicalSolver::kGodunovScalar;
  throw ConfigError("unknown classical solver '" + std::string(name) + "'");
}

ThetaBarRule parse_theta_bar_rule(std::string_view name) {
  if (name == "left") return ThetaBarRule::kLeft;
  if (name == "right") return ThetaBarRule::kRight;
  if (name == "mean" || name == "arithmetic-mean") return ThetaBarRule::kArithmeticMean;
  throw ConfigError("unknown theta-bar rule '" + std::string(name) + "'");
}

std::string_view to_string(ClassicalSolver solver) {
  return solver == ClassicalSolver::kLocalLaxFriedrichs ? "llf" : "godunov-scalar";
}

std::string_view to_string(ThetaBarRule rule) {
  switch (rule) {
    case ThetaBarRule::kLeft:
      return "left";
    case ThetaBarRule::kRight:
      return "right";
    case ThetaBarRule::kArithmeticMean:
      return "arithmetic-mean";
  }
  return "?";
}

ThetaVec theta_intermediate(ThetaBarRule rule, const ThetaVec& theta_left,
                            const ThetaVec& theta_right) {
  switch (rule) {
    case ThetaBarRule::kLeft:
      return theta_left;
    case ThetaBarRule::kRight:
      return theta_right;
    case ThetaBarRule::kArithmeticMean: {
      ThetaVec mid(theta_left.size());
      for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (theta_left[i] + theta_right[i]);
      return mid;
    }
  }
  return theta_left;
}

MappedState delta_map(const SystemModel& model, const StateVec& u, const ThetaVec& theta_from,
                      const ThetaVec& theta_to, MapSide side) {
  if (!model.admissible(u, theta_from)) {
    throw InadmissibleState(std::string(model.name()) + ": state not admissible for mapping");
  }
  if (theta_from == theta_to) return {u, 1.0};
  MappedState mapped = model.map_state(u, theta_from, theta_to, side);
  if (!(mapped.gamma <= 1.0) || mapped.gamma < 0.0) {
    // Negative flow fractions are never produced by the built-in models.
    throw MappingInfeasible(std::string(model.name()) + ": mapping returned gamma = " +
                            std::to_string(mapped.gamma));
  }
  for (double x : mapped.state) {
    if (!std::isfinite(x)) throw MappingInfeasible(std::string(model.name()) + ": non-finite mapped state");
  }
  return mapped;
}

StateVec llf_flux(const SystemModel& model, const StateVec& u_left, const StateVec& u_right,
                  const ThetaVec& theta) {
  const StateVec f_left = model.flux(u_left, theta);
  if (u_left == u_right) return f_left;
  const StateVec f_right = model.flux(u_right, theta);
  const double alpha =
      std::max(model.max_wave_speed(u_left, theta), model.max_wave_speed(u_right, theta));
  StateVec f(u_left.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = 0.5 * (f_left[i] + f_right[i]) - 0.5 * alpha * (u_right[i] - u_left[i]);
  }
  return f;
}

StateVec godunov_scalar_flux(const SystemModel& model, const StateVec& u_left,
                             const StateVec& u_right, const ThetaVec& theta) {
  if (u_left.size() != 1) throw ConfigError("godunov-scalar flux requires a scalar model");
  const double a = u_left[0];
  const double b = u_right[0];
  auto f = [&](double u) { return model.flux(StateVec{u}, theta)[0]; };
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  // min of f over [a, b] if a <= b, max over [b, a] otherwise; extrema sit at
  // the endpoints or at critical points of f.
  double best = f(a);
  const double fb = f(b);
  best = a <= b ? std::min(best, fb) : std::max(best, fb);
  for (double c : model.flux_critical_points(theta)) {
    if (c > lo && c < hi) {
      const double fc = f(c);
      best = a <= b ? std::min(best, fc) : std::max(best, fc);
    }
  }
  return StateVec{best};
}

StateVec classical_flux(ClassicalSolver solver, const SystemModel& model, const StateVec& u_left,
                        const StateVec& u_right, const ThetaVec& theta) {
  switch (solver) {
    case ClassicalSolver::kLocalLaxFriedrichs:
      return llf_flux(model, u_left, u_right, theta);
    case ClassicalSolver::kGodunovScalar:
      return godunov_scalar_flux(model, u_left, u_right, theta);
  }
  throw std::logic_error("unhandled classical solver");
}

StateVec interface_flux(const SystemModel& model, const StateVec& u_minus,
                        const ThetaVec& theta_left, const StateVec& u_plus,
                        const ThetaVec& theta_right, const FluxConfig& cfg) {
  const ThetaVec theta_mid = theta_intermediate(cfg.theta_bar, theta_left, theta_right);
  if (!cfg.delta_mapping) return classical_flux(cfg.solver, model, u_minus, u_plus, theta_mid);
  const MappedState demand = delta_map(model, u_minus, theta_left, theta_mid, MapSide::kDemand);
  const MappedState supply = delta_map(model, u_plus, theta_right, theta_mid, MapSide::kSupply);
  return classical_flux(cfg.solver, model, demand.state, supply.state, theta_mid);
}

double max_feasible_gamma(const std::function<bool(double)>& feasible, double tol) {
  if (feasible(1.0)) return 1.0;
  if (!feasible(0.0)) return -1.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace dflux
