#include "dflux/model_traffic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dflux/errors.hpp"

namespace dflux {

namespace {
// Slack on the admissible set for states produced by floating-point arithmetic.
constexpr double kAdmissibleSlack = 1e-9;
}  // namespace

TrafficModel::TrafficModel(std::size_t n_classes, TrafficParams params)
    : n_classes_(n_classes), params_(params) {
  if (n_classes == 0 || n_classes > kMaxComponents) {
    throw ConfigError("traffic: number of classes must be in 1.." + std::to_string(kMaxComponents));
  }
  if (!(params.v_free > 0.0) || !std::isfinite(params.v_free)) throw ConfigError("traffic: v_f must be positive");
  if (!(params.rho_jam > 0.0) || !std::isfinite(params.rho_jam)) throw ConfigError("traffic: rho_jam must be positive");
}

void TrafficModel::validate_theta(const ThetaVec& theta) const {
  if (theta.size() != n_classes_ + 1) {
    throw ConfigError("traffic: theta must be (a, b_1, ..., b_" + std::to_string(n_classes_) + ")");
  }
  if (!(theta[0] > 0.0) || !std::isfinite(theta[0])) throw ConfigError("traffic: lane count must be positive");
  double prev = 0.0;
  for (std::size_t l = 1; l <= n_classes_; ++l) {
    if (!(theta[l] > prev) || theta[l] > 1.0) {
      throw ConfigError("traffic: scaled free-flow speeds must satisfy 0 < b_1 < ... < b_m <= 1");
    }
    prev = theta[l];
  }
}

double TrafficModel::velocity(double rho_total) const {
  if (!(rho_total >= 0.0) || rho_total > params_.rho_jam) {
    throw InadmissibleState("traffic: density " + std::to_string(rho_total) + " outside [0, rho_jam]");
  }
  return params_.v_free * (1.0 - rho_total / params_.rho_jam);
}

double TrafficModel::clamped_velocity(double rho_total) const {
  return params_.v_free * (1.0 - std::clamp(rho_total, 0.0, params_.rho_jam) / params_.rho_jam);
}

double TrafficModel::lane_flow(double rho_total) const { return rho_total * velocity(rho_total); }

double TrafficModel::total_density(const StateVec& u, const ThetaVec& theta) const {
  double rho = 0.0;
  for (double x : u) rho += x;
  return rho / theta[0];
}

bool TrafficModel::admissible(const StateVec& u, const ThetaVec& theta) const {
  const double slack = kAdmissibleSlack * params_.rho_jam;
  double rho = 0.0;
  for (std::size_t l = 0; l < n_classes_; ++l) {
    const double rl = u[l] / theta[0];
    if (!std::isfinite(rl) || rl < -slack) return false;
    rho += rl;
  }
  return rho <= params_.rho_jam + slack;
}

StateVec TrafficModel::flux(const StateVec& u, const ThetaVec& theta) const {
  if (!admissible(u, theta)) throw InadmissibleState("traffic: state outside the admissible set");
  const double v = clamped_velocity(total_density(u, theta));
  StateVec f(n_classes_);
  for (std::size_t l = 0; l < n_classes_; ++l) f[l] = theta[l + 1] * u[l] * v;
  return f;
}

std::pair<double, double> TrafficModel::eigen_bounds(const StateVec& u, const ThetaVec& theta) const {
  if (!admissible(u, theta)) throw InadmissibleState("traffic: state outside the admissible set");
  const double v = clamped_velocity(total_density(u, theta));
  const double dv = -params_.v_free / params_.rho_jam;
  double weighted = 0.0;  // sum_l rho_l b_l
  for (std::size_t l = 0; l < n_classes_; ++l) weighted += u[l] / theta[0] * theta[l + 1];
  const double lower = theta[1] * v + weighted * dv;
  const double upper = theta[n_classes_] * v;
  return {lower, upper};
}

double TrafficModel::max_wave_speed(const StateVec& u, const ThetaVec& theta) const {
  const auto [lower, upper] = eigen_bounds(u, theta);
  return std::max(std::abs(lower), std::abs(upper));
}

Sign TrafficModel::lambda1_sign(const StateVec& u, const ThetaVec& theta) const {
  const double rho = total_density(u, theta);
  const double crit = params_.critical_density();
  if (rho < crit) return Sign::kPositive;
  if (rho > crit) return Sign::kNegative;
  return Sign::kZero;
}

MappedState TrafficModel::map_state(const StateVec& u, const ThetaVec& theta_from,
                                    const ThetaVec& theta_to, MapSide side) const {
  const double a_from = theta_from[0];
  const double a_to = theta_to[0];
  const double rho = total_density(u, theta_from);
  const double v = clamped_velocity(rho);

  // weights_l = alpha_l rho_l with alpha_l = (b_l a)_from / (b_l a)_to.
  StateVec weights(n_classes_);
  double weight_sum = 0.0;
  for (std::size_t l = 0; l < n_classes_; ++l) {
    const double alpha = theta_from[l + 1] * a_from / (theta_to[l + 1] * a_to);
    weights[l] = alpha * u[l] / a_from;
    weight_sum += weights[l];
  }
  const double demand_flow = std::max(0.0, v * weight_sum);  // per-lane flow to carry at theta_to
  const double capacity = params_.capacity();
  const double crit = params_.critical_density();

  const double gamma = demand_flow > capacity ? capacity / demand_flow : 1.0;
  double mapped_rho = crit;
  if (gamma == 1.0) {
    // q(d) = gamma S has roots crit (1 -+ sqrt(1 - gamma S / q*)).
    const double ratio = std::clamp(demand_flow / capacity, 0.0, 1.0);
    const double root = std::sqrt(1.0 - ratio);
    const double free_root = crit * ratio / (1.0 + root);
    const double congested_root = crit * (1.0 + root);
    const Sign sign = lambda1_sign(u, theta_from);
    bool free_branch = false;
    if (side == MapSide::kDemand) {
      free_branch = sign != Sign::kNegative;  // lambda_1 = 0 maps to lambda_1 >= 0
    } else {
      free_branch = sign == Sign::kPositive;  // lambda_1 = 0 maps to lambda_1 <= 0
    }
    mapped_rho = free_branch ? free_root : congested_root;
  }

  StateVec mapped(n_classes_);
  if (weight_sum > 0.0) {
    for (std::size_t l = 0; l < n_classes_; ++l) {
      mapped[l] = a_to * mapped_rho * weights[l] / weight_sum;
    }
  }
  return {mapped, gamma};
}

std::vector<double> TrafficModel::flux_critical_points(const ThetaVec& theta) const {
  if (n_classes_ != 1) return {};
  return {theta[0] * params_.critical_density()};
}

StateVec TrafficModel::from_primitive(const StateVec& primitive, const ThetaVec& theta) const {
  if (primitive.size() != n_classes_) {
    throw ConfigError("traffic: primitive state needs " + std::to_string(n_classes_) + " densities");
  }
  StateVec u(n_classes_);
  for (std::size_t l = 0; l < n_classes_; ++l) u[l] = theta[0] * primitive[l];
  return u;
}

std::vector<std::string> TrafficModel::observable_names() const {
  std::vector<std::string> names;
  for (std::size_t l = 1; l <= n_classes_; ++l) names.push_back("rho_" + std::to_string(l));
  return names;
}

StateVec TrafficModel::observables(const StateVec& u, const ThetaVec& theta) const {
  StateVec rho(n_classes_);
  for (std::size_t l = 0; l < n_classes_; ++l) rho[l] = u[l] / theta[0];
  return rho;
}

}  // namespace dflux
