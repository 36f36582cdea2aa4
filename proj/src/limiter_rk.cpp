#include "dflux/limiter_rk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dflux/errors.hpp"

namespace dflux {

double minmod(double a1, double a2, double a3) {
  if (a1 > 0.0 && a2 > 0.0 && a3 > 0.0) return std::min({a1, a2, a3});
  if (a1 < 0.0 && a2 < 0.0 && a3 < 0.0) return std::max({a1, a2, a3});
  return 0.0;
}

StateVec minmod(const StateVec& a1, const StateVec& a2, const StateVec& a3) {
  StateVec m(a1.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = minmod(a1[i], a2[i], a3[i]);
  return m;
}

namespace {

struct Neighbor {
  StateVec average;
  const ThetaVec* theta;
};

Neighbor left_neighbor(const DGState& state, const Mesh& mesh, const BoundarySpec& bc, double t,
                       std::size_t j) {
  if (j > 0) return {state.average(j - 1), &mesh.theta(j - 1)};
  const std::size_t last = state.n_cells() - 1;
  if (bc.periodic_at(t)) return {state.average(last), &mesh.theta(last)};
  return {bc.exterior_state(BoundarySideId::kLeft, t, state.average(0), mesh.theta(0)),
          &mesh.theta(0)};
}

Neighbor right_neighbor(const DGState& state, const Mesh& mesh, const BoundarySpec& bc, double t,
                        std::size_t j) {
  const std::size_t last = state.n_cells() - 1;
  if (j < last) return {state.average(j + 1), &mesh.theta(j + 1)};
  if (bc.periodic_at(t)) return {state.average(0), &mesh.theta(0)};
  return {bc.exterior_state(BoundarySideId::kRight, t, state.average(last), mesh.theta(last)),
          &mesh.theta(last)};
}

}  // namespace

MappedNeighbors mapped_neighbor_averages(const DGState& state, const Mesh& mesh,
                                         const SystemModel& model, const FluxConfig& flux_cfg,
                                         const BoundarySpec& bc, double t, std::size_t j) {
  const Neighbor left = left_neighbor(state, mesh, bc, t, j);
  const Neighbor right = right_neighbor(state, mesh, bc, t, j);
  if (!flux_cfg.delta_mapping) return {left.average, right.average};
  const ThetaVec& theta = mesh.theta(j);
  try {
    return {delta_map(model, left.average, *left.theta, theta, MapSide::kDemand).state,
            delta_map(model, right.average, *right.theta, theta, MapSide::kSupply).state};
  } catch (const Error& e) {
    throw SolverError("mapping neighbors of cell " + std::to_string(j) + ": " + e.what(), j);
  }
}

void limit_in_place(DGState& state, const Mesh& mesh, const SystemModel& model,
                    const FluxConfig& flux_cfg, const BoundarySpec& bc, double t) {
  const int k = state.degree();
  if (k == 0) return;
  const std::size_t nc = state.n_components();
  // Averages never change, so neighbors can be read while limiting in place.
  for (std::size_t j = 0; j < state.n_cells(); ++j) {
    const MappedNeighbors nb = mapped_neighbor_averages(state, mesh, model, flux_cfg, bc, t, j);
    const StateVec avg = state.average(j);
    const StateVec slope = state.mode(j, 1);
    const StateVec limited = minmod(slope, nb.right - avg, avg - nb.left);
    for (std::size_t i = 0; i < nc; ++i) {
      if (limited[i] != slope[i]) {
        state.coeff(j, 1, i) = limited[i];
        if (k == 2) state.coeff(j, 2, i) = 0.0;
      }
    }
  }
}

DGState limit(const DGState& state, const Mesh& mesh, const SystemModel& model,
              const FluxConfig& flux_cfg, const BoundarySpec& bc, double t) {
  DGState out = state;
  limit_in_place(out, mesh, model, flux_cfg, bc, t);
  return out;
}

std::pair<StateVec, StateVec> boundary_traces_limited(const DGState& state, const Mesh& mesh,
                                                      const SystemModel& model,
                                                      const FluxConfig& flux_cfg,
                                                      const BoundarySpec& bc, double t,
                                                      std::size_t j) {
  const StateVec avg = state.average(j);
  const StateVec right = evaluate_trace(state, j, TraceSide::kRight);
  const StateVec left = evaluate_trace(state, j, TraceSide::kLeft);
  if (state.degree() == 0) return {right, left};
  const MappedNeighbors nb = mapped_neighbor_averages(state, mesh, model, flux_cfg, bc, t, j);
  const StateVec d_plus = nb.right - avg;
  const StateVec d_minus = avg - nb.left;
  return {avg + minmod(right - avg, d_plus, d_minus), avg - minmod(avg - left, d_plus, d_minus)};
}

CourantConfig CourantConfig::for_degree(int degree) {
  return CourantConfig{1.0 / (2.0 * degree + 1.0), 1e30};
}

void CourantConfig::validate(int degree) const {
  const double bound = 1.0 / (2.0 * degree + 1.0);
  // Allow the bound itself to be given as a rounded decimal.
  if (!(courant > 0.0) || courant > bound * (1.0 + 1e-12)) {
    throw ConfigError("Courant number " + std::to_string(courant) + " outside (0, 1/(2k+1)] = (0, " +
                      std::to_string(bound) + "]");
  }
  if (!(dt_max > 0.0)) throw ConfigError("dt_max must be positive");
}

double compute_dt(const DGState& state, const Mesh& mesh, const SystemModel& model,
                  const FluxConfig& flux_cfg, const BoundarySpec& bc, const CourantConfig& courant) {
  double alpha = 0.0;
  const double t = state.time();
  for (std::size_t j = 0; j < state.n_cells(); ++j) {
    const ThetaVec& theta = mesh.theta(j);
    const MappedNeighbors nb = mapped_neighbor_averages(state, mesh, model, flux_cfg, bc, t, j);
    try {
      alpha = std::max({alpha, model.max_wave_speed(state.average(j), theta),
                        model.max_wave_speed(nb.left, theta), model.max_wave_speed(nb.right, theta)});
    } catch (const Error& e) {
      throw SolverError("wave speed in cell " + std::to_string(j) + ": " + e.what(), j);
    }
  }
  if (!(alpha > 0.0)) return courant.dt_max;
  return std::min(courant.courant * mesh.dx() / alpha, courant.dt_max);
}

RKScheme RKScheme::for_degree(int degree) {
  RKScheme s;
  switch (degree) {
    case 0:
      s.order = 1;
      s.alpha = {{1.0}};
      s.beta = {{1.0}};
      break;
    case 1:
      s.order = 2;
      s.alpha = {{1.0}, {0.5, 0.5}};
      s.beta = {{1.0}, {0.0, 0.5}};
      break;
    case 2:
      s.order = 3;
      s.alpha = {{1.0}, {0.75, 0.25}, {1.0 / 3.0, 0.0, 2.0 / 3.0}};
      s.beta = {{1.0}, {0.0, 0.25}, {0.0, 0.0, 2.0 / 3.0}};
      break;
    default:
      throw ConfigError("no SSP Runge-Kutta scheme for degree " + std::to_string(degree));
  }
  return s;
}

void RKScheme::validate() const {
  if (alpha.empty() || alpha.size() != beta.size()) throw ConfigError("RK scheme: malformed tableau");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i].size() != i + 1 || beta[i].size() != i + 1) {
      throw ConfigError("RK scheme: stage " + std::to_string(i + 1) + " has wrong coefficient count");
    }
    double sum = 0.0;
    for (std::size_t l = 0; l <= i; ++l) {
      if (alpha[i][l] < 0.0 || beta[i][l] < 0.0) {
        throw ConfigError("RK scheme: negative coefficient breaks the SSP property");
      }
      sum += alpha[i][l];
    }
    if (std::abs(sum - 1.0) > 1e-14) throw ConfigError("RK scheme: alpha rows must sum to 1");
  }
}

DGState ssp_rk_step(const DGState& state, double dt, const RhsOperator& rhs,
                    const LimitOperator& limiter, const RKScheme& scheme,
                    StateVec* boundary_inflow) {
  const int n_stages = scheme.stages();
  const std::size_t nc = state.n_components();
  std::vector<DGState> stages;
  std::vector<DGState> derivs;
  std::vector<double> times;
  std::vector<StateVec> inflow;       // integrated boundary inflow carried by each stage
  std::vector<StateVec> inflow_rate;  // instantaneous net boundary flux of each stage
  stages.reserve(n_stages + 1);
  derivs.reserve(n_stages);
  stages.push_back(state);
  times.push_back(state.time());
  inflow.emplace_back(nc);

  for (int i = 1; i <= n_stages; ++i) {
    const auto& a = scheme.alpha[i - 1];
    const auto& b = scheme.beta[i - 1];
    // Evaluate L(u^(i-1)) once it is first needed.
    derivs.emplace_back();
    try {
      inflow_rate.push_back(rhs(stages[i - 1], times[i - 1], derivs.back()));
    } catch (const SolverError& e) {
      throw SolverError(std::string(e.what()) + " (RK stage " + std::to_string(i) + ")", e.cell(), i);
    }

    DGState next(state.n_cells(), state.degree(), nc);
    auto out = next.raw();
    double t_next = 0.0;
    StateVec inflow_next(nc);
    for (int l = 0; l < i; ++l) {
      const double al = a[l];
      const double bl = b[l] * dt;
      if (al != 0.0) {
        auto src = stages[l].raw();
        for (std::size_t n = 0; n < out.size(); ++n) out[n] += al * src[n];
      }
      if (bl != 0.0) {
        auto d = derivs[l].raw();
        for (std::size_t n = 0; n < out.size(); ++n) out[n] += bl * d[n];
      }
      t_next += al * times[l] + b[l] * dt;
      inflow_next += al * inflow[l] + bl * inflow_rate[l];
    }
    if (i == n_stages) t_next = state.time() + dt;
    next.set_time(t_next);
    try {
      limiter(next, t_next);
    } catch (const SolverError& e) {
      throw SolverError(std::string(e.what()) + " (RK stage " + std::to_string(i) + ")", e.cell(), i);
    }
    if (!next.all_finite()) throw SolverError("non-finite state in RK stage " + std::to_string(i), std::nullopt, i);
    stages.push_back(std::move(next));
    times.push_back(t_next);
    inflow.push_back(inflow_next);
  }
  if (boundary_inflow != nullptr) *boundary_inflow = inflow.back();
  return std::move(stages.back());
}

}  // namespace dflux
