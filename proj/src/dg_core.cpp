#include "dflux/dg_core.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "dflux/errors.hpp"

namespace dflux {

LegendreValue legendre_eval(int l, double s) {
  switch (l) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {s, 1.0};
    case 2:
      return {0.5 * (3.0 * s * s - 1.0), 3.0 * s};
    default:
      throw std::out_of_range("legendre_eval: basis index " + std::to_string(l) +
                              " outside [0, " + std::to_string(kMaxDegree) + "]");
  }
}

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence; any n.
std::pair<double, double> legendre_recurrence(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

QuadratureRule QuadratureRule::gauss_legendre(int n_points) {
  if (n_points < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  QuadratureRule rule;
  rule.nodes.resize(n_points);
  rule.weights.resize(n_points);
  for (int i = 0; i < n_points; ++i) {
    // Chebyshev-like initial guess, then Newton.
    double x = -std::cos(std::numbers::pi * (i + 0.75) / (n_points + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre_recurrence(n_points, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    auto [p, dp] = legendre_recurrence(n_points, x);
    (void)p;
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // Symmetrize so that odd moments vanish to the last bit.
  for (int i = 0; i < n_points / 2; ++i) {
    const int k = n_points - 1 - i;
    const double x = 0.5 * (rule.nodes[k] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[k] + rule.weights[i]);
    rule.nodes[i] = -x;
    rule.nodes[k] = x;
    rule.weights[i] = rule.weights[k] = w;
  }
  if (n_points % 2 == 1) rule.nodes[n_points / 2] = 0.0;
  return rule;
}

QuadratureRule QuadratureRule::for_degree(int degree) { return gauss_legendre(degree + 1); }

Mesh::Mesh(double length, std::size_t n_cells, std::vector<ThetaVec> theta)
    : length_(length), n_cells_(n_cells), dx_(0.0), theta_(std::move(theta)) {
  if (!(length > 0.0) || !std::isfinite(length)) throw ConfigError("mesh: length must be positive");
  if (n_cells == 0) throw ConfigError("mesh: need at least one cell");
  if (theta_.size() != n_cells) {
    throw ConfigError("mesh: expected " + std::to_string(n_cells) + " theta entries, got " +
                      std::to_string(theta_.size()));
  }
  dx_ = length / static_cast<double>(n_cells);
}

Mesh Mesh::from_field(double length, std::size_t n_cells,
                      const std::function<ThetaVec(double)>& theta_field) {
  if (n_cells == 0) throw ConfigError("mesh: need at least one cell");
  std::vector<ThetaVec> theta(n_cells);
  const double dx = length / static_cast<double>(n_cells);
  for (std::size_t j = 0; j < n_cells; ++j) theta[j] = theta_field((static_cast<double>(j) + 0.5) * dx);
  return Mesh(length, n_cells, std::move(theta));
}

void Mesh::validate(const SystemModel& model) const {
  for (std::size_t j = 0; j < n_cells_; ++j) {
    if (theta_[j].size() != model.n_theta()) {
      throw ConfigError("mesh: cell " + std::to_string(j) + " has " +
                        std::to_string(theta_[j].size()) + " parameters, model expects " +
                        std::to_string(model.n_theta()));
    }
    try {
      model.validate_theta(theta_[j]);
    } catch (const ConfigError& e) {
      throw ConfigError("mesh: cell " + std::to_string(j) + ": " + e.what());
    }
  }
}

DGState::DGState(std::size_t n_cells, int degree, std::size_t n_components, double time)
    : n_cells_(n_cells), degree_(degree), n_components_(n_components), time_(time) {
  if (degree < 0 || degree > kMaxDegree) {
    throw ConfigError("degree " + std::to_string(degree) + " not supported (0.." +
                      std::to_string(kMaxDegree) + ")");
  }
  if (n_components == 0 || n_components > kMaxComponents) {
    throw ConfigError("unsupported number of components: " + std::to_string(n_components));
  }
  data_.assign(n_cells * n_basis() * n_components, 0.0);
}

StateVec DGState::mode(std::size_t j, std::size_t l) const {
  StateVec v(n_components_);
  const double* p = &data_[index(j, l, 0)];
  for (std::size_t i = 0; i < n_components_; ++i) v[i] = p[i];
  return v;
}

void DGState::set_mode(std::size_t j, std::size_t l, const StateVec& v) {
  double* p = &data_[index(j, l, 0)];
  for (std::size_t i = 0; i < n_components_; ++i) p[i] = v[i];
}

bool DGState::all_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

BoundarySpec BoundarySpec::periodic() {
  BoundarySpec bc;
  bc.left.kind = BoundaryKind::kPeriodic;
  bc.right.kind = BoundaryKind::kPeriodic;
  return bc;
}

BoundarySpec BoundarySpec::outflow() { return BoundarySpec{}; }

void BoundarySpec::validate() const {
  const bool lp = left.kind == BoundaryKind::kPeriodic;
  const bool rp = right.kind == BoundaryKind::kPeriodic;
  if (lp != rp) throw ConfigError("boundary: periodic requires both sides periodic");
  if (left.kind == BoundaryKind::kPrescribed && !left.exterior) {
    throw ConfigError("boundary: left prescribed trace has no state function");
  }
  if (right.kind == BoundaryKind::kPrescribed && !right.exterior) {
    throw ConfigError("boundary: right prescribed trace has no state function");
  }
  if (periodic_from && !std::isfinite(*periodic_from)) {
    throw ConfigError("boundary: periodic switch time must be finite");
  }
}

bool BoundarySpec::periodic_at(double t) const {
  if (left.kind == BoundaryKind::kPeriodic) return true;
  return periodic_from.has_value() && t >= *periodic_from;
}

StateVec BoundarySpec::exterior_state(BoundarySideId side, double t, const StateVec& interior,
                                      const ThetaVec& theta) const {
  const BoundarySide& b = side == BoundarySideId::kLeft ? left : right;
  switch (b.kind) {
    case BoundaryKind::kOutflow:
      return interior;
    case BoundaryKind::kPrescribed:
      return b.exterior(t, interior, theta);
    case BoundaryKind::kPeriodic:
      break;
  }
  throw std::logic_error("exterior_state requested for a periodic boundary");
}

DGState project_initial(const std::function<StateVec(double)>& u0, const Mesh& mesh, int degree,
                        std::size_t n_components) {
  DGState state(mesh.n_cells(), degree, n_components);
  const QuadratureRule rule = QuadratureRule::for_degree(degree);
  const double half = 0.5 * mesh.dx();
  for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
    const double xc = mesh.center(j);
    for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
      const StateVec value = u0(xc + half * rule.nodes[g]);
      if (value.size() != n_components) {
        throw ConfigError("initial data returned " + std::to_string(value.size()) +
                          " components, expected " + std::to_string(n_components));
      }
      for (std::size_t i = 0; i < n_components; ++i) {
        if (!std::isfinite(value[i])) {
          throw ConfigError("initial data is not finite in cell " + std::to_string(j));
        }
      }
      for (int l = 0; l <= degree; ++l) {
        // (2l+1)/dx * int u0 phi_l dx = (2l+1)/2 * sum_g w_g u0(s_g) L_l(s_g)
        const double factor = 0.5 * (2.0 * l + 1.0) * rule.weights[g] * legendre_eval(l, rule.nodes[g]).value;
        for (std::size_t i = 0; i < n_components; ++i) {
          state.coeff(j, static_cast<std::size_t>(l), i) += factor * value[i];
        }
      }
    }
  }
  return state;
}

StateVec evaluate_trace(const DGState& state, std::size_t j, TraceSide side) {
  if (j >= state.n_cells()) throw std::out_of_range("evaluate_trace: cell index out of range");
  StateVec v = state.mode(j, 0);
  const double sign = side == TraceSide::kRight ? 1.0 : -1.0;
  double basis = 1.0;
  for (std::size_t l = 1; l < state.n_basis(); ++l) {
    basis *= sign;  // L_l(1) = 1, L_l(-1) = (-1)^l
    for (std::size_t i = 0; i < state.n_components(); ++i) v[i] += basis * state.coeff(j, l, i);
  }
  return v;
}

StateVec evaluate_local(const DGState& state, std::size_t j, double s) {
  StateVec v(state.n_components());
  for (std::size_t l = 0; l < state.n_basis(); ++l) {
    const double b = legendre_eval(static_cast<int>(l), s).value;
    for (std::size_t i = 0; i < state.n_components(); ++i) v[i] += b * state.coeff(j, l, i);
  }
  return v;
}

void semidiscrete_rhs(const DGState& state, const Mesh& mesh, const SystemModel& model,
                      const FluxConfig& flux_cfg, const BoundarySpec& bc, double t, DGState& out,
                      BoundaryFluxes* boundary_fluxes) {
  const std::size_t n = state.n_cells();
  const std::size_t nc = state.n_components();
  const int k = state.degree();
  if (n != mesh.n_cells()) throw std::invalid_argument("semidiscrete_rhs: mesh/state size mismatch");
  if (!out.same_shape(state)) out = DGState(n, k, nc);
  out.set_time(t);

  // f-hat at interface j - 1/2 for j = 0..n (interface n is x = L).
  std::vector<StateVec> fhat(n + 1);
  const bool periodic = bc.periodic_at(t);
  auto flux_at = [&](std::size_t iface, const StateVec& um, const ThetaVec& thl, const StateVec& up,
                     const ThetaVec& thr, std::size_t cell) {
    try {
      fhat[iface] = interface_flux(model, um, thl, up, thr, flux_cfg);
    } catch (const Error& e) {
      throw SolverError("interface flux next to cell " + std::to_string(cell) + ": " + e.what(), cell);
    }
  };
  for (std::size_t iface = 1; iface < n; ++iface) {
    flux_at(iface, evaluate_trace(state, iface - 1, TraceSide::kRight), mesh.theta(iface - 1),
            evaluate_trace(state, iface, TraceSide::kLeft), mesh.theta(iface), iface);
  }
  const StateVec left_inner = evaluate_trace(state, 0, TraceSide::kLeft);
  const StateVec right_inner = evaluate_trace(state, n - 1, TraceSide::kRight);
  if (periodic) {
    flux_at(0, right_inner, mesh.theta(n - 1), left_inner, mesh.theta(0), 0);
    fhat[n] = fhat[0];
  } else {
    const StateVec ghost_l = bc.exterior_state(BoundarySideId::kLeft, t, left_inner, mesh.theta(0));
    const StateVec ghost_r =
        bc.exterior_state(BoundarySideId::kRight, t, right_inner, mesh.theta(n - 1));
    flux_at(0, ghost_l, mesh.theta(0), left_inner, mesh.theta(0), 0);
    flux_at(n, right_inner, mesh.theta(n - 1), ghost_r, mesh.theta(n - 1), n - 1);
  }
  if (boundary_fluxes != nullptr) {
    boundary_fluxes->left = fhat[0];
    boundary_fluxes->right = fhat[n];
  }

  const QuadratureRule rule = QuadratureRule::for_degree(k);
  const double inv_dx = 1.0 / mesh.dx();
  for (std::size_t j = 0; j < n; ++j) {
    const ThetaVec& theta = mesh.theta(j);
    // Volume term: int f(u_h, theta_j) (phi_l)_x dx = sum_g w_g f(u_h(s_g)) L_l'(s_g).
    std::array<StateVec, kMaxDegree + 1> volume;
    volume.fill(StateVec(nc));
    if (k > 0) {
      for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
        StateVec f;
        try {
          f = model.flux(evaluate_local(state, j, rule.nodes[g]), theta);
        } catch (const Error& e) {
          throw SolverError("volume flux in cell " + std::to_string(j) + ": " + e.what(), j);
        }
        for (int l = 1; l <= k; ++l) {
          const double w = rule.weights[g] * legendre_eval(l, rule.nodes[g]).derivative;
          for (std::size_t i = 0; i < nc; ++i) volume[l][i] += w * f[i];
        }
      }
    }
    double parity = 1.0;
    for (int l = 0; l <= k; ++l) {
      const double scale = (2.0 * l + 1.0) * inv_dx;
      for (std::size_t i = 0; i < nc; ++i) {
        out.coeff(j, static_cast<std::size_t>(l), i) =
            scale * (volume[l][i] - fhat[j + 1][i] + parity * fhat[j][i]);
      }
      parity = -parity;
    }
  }
}

DGState semidiscrete_rhs(const DGState& state, const Mesh& mesh, const SystemModel& model,
                         const FluxConfig& flux_cfg, const BoundarySpec& bc, double t) {
  DGState out;
  semidiscrete_rhs(state, mesh, model, flux_cfg, bc, t, out);
  return out;
}

StateVec total_mass(const DGState& state, const Mesh& mesh) {
  StateVec m(state.n_components());
  for (std::size_t j = 0; j < state.n_cells(); ++j) {
    for (std::size_t i = 0; i < state.n_components(); ++i) m[i] += state.coeff(j, 0, i);
  }
  return m * mesh.dx();
}

}  // namespace dflux
