#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "dflux/dg_core.hpp"
#include "dflux/flux_delta.hpp"
#include "dflux/system_model.hpp"

namespace dflux {

/// s * min|a_n| if all three arguments share the sign s, otherwise 0.
double minmod(double a1, double a2, double a3);
StateVec minmod(const StateVec& a1, const StateVec& a2, const StateVec& a3);

/// Averages of the two neighbors of cell j mapped onto theta_j (left neighbor
/// as demand side, right neighbor as supply side). At non-periodic boundaries
/// the ghost state of the BoundarySpec stands in for the missing neighbor.
struct MappedNeighbors {
  StateVec left;
  StateVec right;
};
MappedNeighbors mapped_neighbor_averages(const DGState& state, const Mesh& mesh,
                                         const SystemModel& model, const FluxConfig& flux_cfg,
                                         const BoundarySpec& bc, double t, std::size_t j);

/// Slope limiter with mapped neighbor averages. Cell averages are left
/// untouched; degree 0 is a no-op. For degree 2 the quadratic mode is dropped
/// whenever the linear mode gets limited.
void limit_in_place(DGState& state, const Mesh& mesh, const SystemModel& model,
                    const FluxConfig& flux_cfg, const BoundarySpec& bc, double t);
DGState limit(const DGState& state, const Mesh& mesh, const SystemModel& model,
              const FluxConfig& flux_cfg, const BoundarySpec& bc, double t);

/// Limited edge values of cell j: (u^-_{j+1/2}, u^+_{j-1/2}).
std::pair<StateVec, StateVec> boundary_traces_limited(const DGState& state, const Mesh& mesh,
                                                      const SystemModel& model,
                                                      const FluxConfig& flux_cfg,
                                                      const BoundarySpec& bc, double t,
                                                      std::size_t j);

struct CourantConfig {
  double courant = 1.0 / 3.0;
  double dt_max = 1e30;

  static CourantConfig for_degree(int degree);
  /// Throws ConfigError unless 0 < courant <= 1 / (2k + 1) and dt_max > 0.
  void validate(int degree) const;
};

/// CFL time step C * dx / alpha, alpha the largest wave-speed bound over cell
/// averages and neighbor averages mapped onto each cell. Capped at dt_max.
double compute_dt(const DGState& state, const Mesh& mesh, const SystemModel& model,
                  const FluxConfig& flux_cfg, const BoundarySpec& bc, const CourantConfig& courant);

/// Explicit SSP Runge-Kutta scheme in Shu-Osher form:
/// u^(i) = sum_{l<i} alpha[i-1][l] u^(l) + beta[i-1][l] dt L(u^(l)).
struct RKScheme {
  int order = 1;
  std::vector<std::vector<double>> alpha;
  std::vector<std::vector<double>> beta;

  /// Forward Euler for k = 0, SSP-RK2 for k = 1, SSP-RK3 for k = 2.
  static RKScheme for_degree(int degree);
  int stages() const { return static_cast<int>(alpha.size()); }
  void validate() const;
};

/// Writes L(u) into `out` and returns the net flux entering through the
/// domain boundaries (left flux minus right flux).
using RhsOperator = std::function<StateVec(const DGState& u, double t, DGState& out)>;
using LimitOperator = std::function<void(DGState& u, double t)>;

/// One RK step with the limiter applied after every stage. If
/// `boundary_inflow` is non-null it receives the time-integrated net boundary
/// flux consistent with the stage combination, so that
/// mass(result) - mass(state) == dx-free inflow (up to round-off).
DGState ssp_rk_step(const DGState& state, double dt, const RhsOperator& rhs,
                    const LimitOperator& limiter, const RKScheme& scheme,
                    StateVec* boundary_inflow = nullptr);

}  // namespace dflux
