#pragma once

#include <string>
#include <vector>

#include "dflux/system_model.hpp"

namespace dflux {

/// Nonlinear elastic waves in a heterogeneous medium:
///   eps_t - v_x = 0,  (rho v)_t - sigma(eps, K)_x = 0,
/// with sigma(eps, K) = K eps + beta K^2 eps^2.
///
/// State u = (eps, q = rho v), theta = (rho, K).
class ElasticModel final : public SystemModel {
 public:
  explicit ElasticModel(double beta = 0.3);

  double beta() const { return beta_; }

  std::string_view name() const override { return "elastic"; }
  std::size_t n_components() const override { return 2; }
  std::size_t n_theta() const override { return 2; }

  void validate_theta(const ThetaVec& theta) const override;
  bool admissible(const StateVec& u, const ThetaVec& theta) const override;
  StateVec flux(const StateVec& u, const ThetaVec& theta) const override;
  double max_wave_speed(const StateVec& u, const ThetaVec& theta) const override;
  MappedState map_state(const StateVec& u, const ThetaVec& theta_from, const ThetaVec& theta_to,
                        MapSide side) const override;
  StateVec from_primitive(const StateVec& primitive, const ThetaVec& theta) const override;
  std::vector<std::string> observable_names() const override { return {"eps", "sigma"}; }
  StateVec observables(const StateVec& u, const ThetaVec& theta) const override;

  double stress(double eps, double modulus) const;
  /// d sigma / d eps.
  double stress_slope(double eps, double modulus) const;
  /// (lambda_1, lambda_2) = (-c, c), c = sqrt(sigma_eps / rho). Throws
  /// InadmissibleState when sigma_eps <= 0.
  std::pair<double, double> eigenvalues(const StateVec& u, const ThetaVec& theta) const;
  /// Strain with stress `sigma` at modulus K on the hyperbolic branch. Throws
  /// MappingInfeasible when 1 + 4 beta sigma < 0.
  double strain_for_stress(double sigma, double modulus) const;

 private:
  double beta_;
};

/// sigma(eps, K) = K eps + beta K^2 eps^2.
double elastic_stress(double eps, double modulus, double beta);

/// Boundary velocity of the layered-medium forcing:
/// v(t) = -A (1 + cos(pi (t - t_center) / t_half)) for t <= t_center + t_half, else 0.
struct VelocityPulse {
  double amplitude = 0.2;
  double t_center = 30.0;
  double t_half = 30.0;

  double operator()(double t) const;
};

}  // namespace dflux
