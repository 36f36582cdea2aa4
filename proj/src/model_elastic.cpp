#include "dflux/model_elastic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dflux/errors.hpp"

namespace dflux {

double elastic_stress(double eps, double modulus, double beta) {
  return modulus * eps + beta * modulus * modulus * eps * eps;
}

ElasticModel::ElasticModel(double beta) : beta_(beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("elastic: beta must be >= 0");
}

void ElasticModel::validate_theta(const ThetaVec& theta) const {
  if (theta.size() != 2) throw ConfigError("elastic: theta must be (rho, K)");
  if (!(theta[0] > 0.0) || !std::isfinite(theta[0])) throw ConfigError("elastic: density must be positive");
  if (!(theta[1] > 0.0) || !std::isfinite(theta[1])) throw ConfigError("elastic: modulus must be positive");
}

double ElasticModel::stress(double eps, double modulus) const {
  return elastic_stress(eps, modulus, beta_);
}

double ElasticModel::stress_slope(double eps, double modulus) const {
  return modulus + 2.0 * beta_ * modulus * modulus * eps;
}

bool ElasticModel::admissible(const StateVec& u, const ThetaVec& theta) const {
  return std::isfinite(u[0]) && std::isfinite(u[1]) && stress_slope(u[0], theta[1]) > 0.0;
}

StateVec ElasticModel::flux(const StateVec& u, const ThetaVec& theta) const {
  return StateVec{-u[1] / theta[0], -stress(u[0], theta[1])};
}

std::pair<double, double> ElasticModel::eigenvalues(const StateVec& u, const ThetaVec& theta) const {
  const double slope = stress_slope(u[0], theta[1]);
  if (!(slope > 0.0)) {
    throw InadmissibleState("elastic: loss of hyperbolicity (d sigma/d eps = " +
                            std::to_string(slope) + ")");
  }
  const double c = std::sqrt(slope / theta[0]);
  return {-c, c};
}

double ElasticModel::max_wave_speed(const StateVec& u, const ThetaVec& theta) const {
  return eigenvalues(u, theta).second;
}

double ElasticModel::strain_for_stress(double sigma, double modulus) const {
  const double disc = 1.0 + 4.0 * beta_ * sigma;
  if (disc < 0.0) {
    throw MappingInfeasible("elastic: stress " + std::to_string(sigma) +
                            " below the attainable minimum");
  }
  // (sqrt(disc) - 1) / (2 beta K), rationalized so that beta -> 0 gives sigma / K.
  return 2.0 * sigma / (modulus * (1.0 + std::sqrt(disc)));
}

MappedState ElasticModel::map_state(const StateVec& u, const ThetaVec& theta_from,
                                    const ThetaVec& theta_to, MapSide /*side*/) const {
  // lambda_1 < 0 < lambda_2 everywhere, so the sign constraints hold for both
  // sides and the flow can always be matched exactly (gamma = 1).
  const double q = theta_to[0] * u[1] / theta_from[0];
  const double eps = strain_for_stress(stress(u[0], theta_from[1]), theta_to[1]);
  return {StateVec{eps, q}, 1.0};
}

StateVec ElasticModel::from_primitive(const StateVec& primitive, const ThetaVec& theta) const {
  if (primitive.size() != 2) throw ConfigError("elastic: primitive state is (eps, v)");
  return StateVec{primitive[0], theta[0] * primitive[1]};
}

StateVec ElasticModel::observables(const StateVec& u, const ThetaVec& theta) const {
  return StateVec{u[0], stress(u[0], theta[1])};
}

double VelocityPulse::operator()(double t) const {
  if (t > t_center + t_half) return 0.0;
  return -amplitude * (1.0 + std::cos(std::numbers::pi * (t - t_center) / t_half));
}

}  // namespace dflux
