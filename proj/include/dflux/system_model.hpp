#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dflux/fixed_vec.hpp"

namespace dflux {

/// Which side of an interface a trace comes from. The upstream trace offers
/// flow (demand), the downstream trace accepts it (supply).
enum class MapSide { kDemand, kSupply };

/// Result of mapping a state onto another parameter value: the mapped state
/// and the fraction of the original flow it carries.
struct MappedState {
  StateVec state;
  double gamma = 1.0;
};

/// Contract for a system u_t + f(u, theta(x))_x = 0 with piecewise constant theta.
///
/// Implementations are stateless after construction and safe to share across
/// threads.
class SystemModel {
 public:
  virtual ~SystemModel() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t n_components() const = 0;
  virtual std::size_t n_theta() const = 0;

  /// Throws ConfigError if theta is not a valid parameter vector.
  virtual void validate_theta(const ThetaVec& theta) const = 0;

  virtual bool admissible(const StateVec& u, const ThetaVec& theta) const = 0;

  virtual StateVec flux(const StateVec& u, const ThetaVec& theta) const = 0;

  /// Upper bound on max_l |lambda_l(u, theta)|.
  virtual double max_wave_speed(const StateVec& u, const ThetaVec& theta) const = 0;

  /// Maps u, admissible at theta_from, onto theta_to: the state at theta_to whose
  /// flux is gamma * f(u, theta_from), with gamma <= 1 maximal subject to the
  /// characteristic sign constraints for the given side.
  virtual MappedState map_state(const StateVec& u, const ThetaVec& theta_from,
                                const ThetaVec& theta_to, MapSide side) const = 0;

  /// For scalar models: values of u where df/du = 0 at fixed theta. Used by the
  /// exact Godunov flux. Empty for systems and monotone fluxes.
  virtual std::vector<double> flux_critical_points(const ThetaVec& /*theta*/) const { return {}; }

  /// Conserved state from the model's natural variables (elastic: strain and
  /// velocity; traffic: per-lane class densities).
  virtual StateVec from_primitive(const StateVec& primitive, const ThetaVec& theta) const = 0;

  virtual std::vector<std::string> observable_names() const = 0;
  virtual StateVec observables(const StateVec& u, const ThetaVec& theta) const = 0;
};

}  // namespace dflux
