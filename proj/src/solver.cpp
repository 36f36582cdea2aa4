#include "dflux/solver.hpp"

#include "dflux/errors.hpp"

namespace dflux {

DGSolver::DGSolver(std::shared_ptr<const SystemModel> model, Mesh mesh, BoundarySpec bc, int degree,
                   FluxConfig flux, CourantConfig courant)
    : model_(std::move(model)),
      mesh_(std::move(mesh)),
      bc_(std::move(bc)),
      degree_(degree),
      flux_(flux),
      courant_(courant),
      scheme_(RKScheme::for_degree(degree)) {
  if (!model_) throw ConfigError("solver: no model");
  mesh_.validate(*model_);
  bc_.validate();
  flux_.validate(*model_);
  courant_.validate(degree_);
  scheme_.validate();
}

DGState DGSolver::initialize(const std::function<StateVec(double)>& u0) const {
  DGState state = project_initial(u0, mesh_, degree_, model_->n_components());
  limit(state, 0.0);
  return state;
}

DGState DGSolver::initialize_primitive(const std::function<StateVec(double)>& primitive) const {
  const double dx = mesh_.dx();
  const std::size_t n = mesh_.n_cells();
  return initialize([&](double x) {
    // theta is constant per cell; points on a cell edge belong to the cell on the right.
    auto j = static_cast<std::size_t>(x / dx);
    if (j >= n) j = n - 1;
    return model_->from_primitive(primitive(x), mesh_.theta(j));
  });
}

void DGSolver::limit(DGState& state, double t) const {
  limit_in_place(state, mesh_, *model_, flux_, bc_, t);
}

StateVec DGSolver::rhs(const DGState& state, double t, DGState& out) const {
  BoundaryFluxes fluxes;
  semidiscrete_rhs(state, mesh_, *model_, flux_, bc_, t, out, &fluxes);
  return fluxes.left - fluxes.right;
}

double DGSolver::stable_dt(const DGState& state) const {
  return compute_dt(state, mesh_, *model_, flux_, bc_, courant_);
}

DGState DGSolver::step(const DGState& state, double dt, StateVec* boundary_inflow) const {
  return ssp_rk_step(
      state, dt, [this](const DGState& u, double t, DGState& out) { return rhs(u, t, out); },
      [this](DGState& u, double t) { limit(u, t); }, scheme_, boundary_inflow);
}

}  // namespace dflux
