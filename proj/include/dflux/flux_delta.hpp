#pragma once

#include <functional>
#include <string_view>

#include "dflux/fixed_vec.hpp"
#include "dflux/system_model.hpp"

namespace dflux {

enum class ClassicalSolver { kLocalLaxFriedrichs, kGodunovScalar };

/// Rule for the intermediate parameter value at an interface.
enum class ThetaBarRule { kLeft, kRight, kArithmeticMean };

struct FluxConfig {
  ClassicalSolver solver = ClassicalSolver::kLocalLaxFriedrichs;
  ThetaBarRule theta_bar = ThetaBarRule::kRight;
  /// When false, traces are fed to the classical solver unmapped at the
  /// intermediate theta (and the limiter compares raw neighbor averages).
  bool delta_mapping = true;

  /// Throws ConfigError if the combination is not usable with the model.
  void validate(const SystemModel& model) const;
};

ClassicalSolver parse_classical_solver(std::string_view name);
ThetaBarRule parse_theta_bar_rule(std::string_view name);
std::string_view to_string(ClassicalSolver solver);
std::string_view to_string(ThetaBarRule rule);

ThetaVec theta_intermediate(ThetaBarRule rule, const ThetaVec& theta_left,
                            const ThetaVec& theta_right);

/// Maps u from theta_from onto theta_to. Identity (gamma = 1) when the two
/// parameter vectors are equal; otherwise dispatches to the model.
///
/// Throws InadmissibleState if u is not admissible at theta_from and
/// MappingInfeasible if the model returns an unusable result.
MappedState delta_map(const SystemModel& model, const StateVec& u, const ThetaVec& theta_from,
                      const ThetaVec& theta_to, MapSide side);

/// Local Lax-Friedrichs flux at frozen theta.
StateVec llf_flux(const SystemModel& model, const StateVec& u_left, const StateVec& u_right,
                  const ThetaVec& theta);

/// Exact Godunov flux for scalar models at frozen theta.
StateVec godunov_scalar_flux(const SystemModel& model, const StateVec& u_left,
                             const StateVec& u_right, const ThetaVec& theta);

StateVec classical_flux(ClassicalSolver solver, const SystemModel& model, const StateVec& u_left,
                        const StateVec& u_right, const ThetaVec& theta);

/// Numerical flux at an interface separating theta_left and theta_right.
StateVec interface_flux(const SystemModel& model, const StateVec& u_minus,
                        const ThetaVec& theta_left, const StateVec& u_plus,
                        const ThetaVec& theta_right, const FluxConfig& cfg);

/// Largest gamma in [0, 1] for which `feasible(gamma)` holds, assuming
/// feasibility is monotone (feasible for all gamma below the maximum).
/// Bisection fallback for models without a closed-form flow maximization.
/// Returns a negative value if gamma = 0 is infeasible.
double max_feasible_gamma(const std::function<bool(double)>& feasible, double tol = 1e-13);

}  // namespace dflux
