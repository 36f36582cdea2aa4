#pragma once

#include <functional>
#include <memory>

#include "dflux/dg_core.hpp"
#include "dflux/flux_delta.hpp"
#include "dflux/limiter_rk.hpp"
#include "dflux/system_model.hpp"

namespace dflux {

/// Bundles a model, mesh, boundary conditions and discretization choices into
/// the limited RKDG time stepper.
class DGSolver {
 public:
  DGSolver(std::shared_ptr<const SystemModel> model, Mesh mesh, BoundarySpec bc, int degree,
           FluxConfig flux, CourantConfig courant);

  const SystemModel& model() const { return *model_; }
  const Mesh& mesh() const { return mesh_; }
  const BoundarySpec& boundary() const { return bc_; }
  const FluxConfig& flux_config() const { return flux_; }
  const CourantConfig& courant() const { return courant_; }
  const RKScheme& scheme() const { return scheme_; }
  int degree() const { return degree_; }

  /// Projection of u0 followed by the limiter.
  DGState initialize(const std::function<StateVec(double)>& u0) const;
  /// Projection of a primitive-variable field (see SystemModel::from_primitive).
  DGState initialize_primitive(const std::function<StateVec(double)>& primitive) const;

  void limit(DGState& state, double t) const;
  StateVec rhs(const DGState& state, double t, DGState& out) const;
  double stable_dt(const DGState& state) const;

  /// Advances by dt (caller picks dt, usually min(stable_dt, time to next event)).
  DGState step(const DGState& state, double dt, StateVec* boundary_inflow = nullptr) const;

 private:
  std::shared_ptr<const SystemModel> model_;
  Mesh mesh_;
  BoundarySpec bc_;
  int degree_;
  FluxConfig flux_;
  CourantConfig courant_;
  RKScheme scheme_;
};

}  // namespace dflux
