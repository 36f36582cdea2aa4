#pragma once

#include <string>
#include <vector>

#include "dflux/system_model.hpp"

namespace dflux {

struct TrafficParams {
  double v_free = 40.0;   // reference free-flow speed
  double rho_jam = 1.0;   // jam density per lane
  double critical_density() const { return 0.5 * rho_jam; }
  /// Per-lane capacity q(rho*) = v_f rho_jam / 4.
  double capacity() const { return 0.25 * v_free * rho_jam; }
};

enum class Sign { kNegative = -1, kZero = 0, kPositive = 1 };

/// Multi-class LWR model on an inhomogeneous road:
///   f_l(u, theta) = b_l u_l v(sum_l u_l / a),  v(rho) = v_f (1 - rho / rho_jam),
/// with u_l = a rho_l, theta = (a, b_1, ..., b_m), 0 < b_1 < ... < b_m <= 1.
class TrafficModel final : public SystemModel {
 public:
  TrafficModel(std::size_t n_classes, TrafficParams params);

  const TrafficParams& params() const { return params_; }
  std::size_t n_classes() const { return n_classes_; }

  std::string_view name() const override { return "traffic"; }
  std::size_t n_components() const override { return n_classes_; }
  std::size_t n_theta() const override { return n_classes_ + 1; }

  void validate_theta(const ThetaVec& theta) const override;
  bool admissible(const StateVec& u, const ThetaVec& theta) const override;
  StateVec flux(const StateVec& u, const ThetaVec& theta) const override;
  double max_wave_speed(const StateVec& u, const ThetaVec& theta) const override;
  MappedState map_state(const StateVec& u, const ThetaVec& theta_from, const ThetaVec& theta_to,
                        MapSide side) const override;
  std::vector<double> flux_critical_points(const ThetaVec& theta) const override;
  StateVec from_primitive(const StateVec& primitive, const ThetaVec& theta) const override;
  std::vector<std::string> observable_names() const override;
  StateVec observables(const StateVec& u, const ThetaVec& theta) const override;

  /// v(rho). Throws InadmissibleState outside [0, rho_jam].
  double velocity(double rho_total) const;
  /// q(rho) = rho v(rho).
  double lane_flow(double rho_total) const;
  double total_density(const StateVec& u, const ThetaVec& theta) const;

  /// Bounds (lambda_lower, lambda_upper) enclosing all eigenvalues:
  /// lambda_lower = v_1 + sum_l rho_l dv_l/drho, lambda_upper = v_m.
  std::pair<double, double> eigen_bounds(const StateVec& u, const ThetaVec& theta) const;
  /// Sign of lambda_1: positive below the critical density, negative above.
  Sign lambda1_sign(const StateVec& u, const ThetaVec& theta) const;

 private:
  /// Velocity with the total density clamped into [0, rho_jam].
  double clamped_velocity(double rho_total) const;

  std::size_t n_classes_;
  TrafficParams params_;
};

}  // namespace dflux
