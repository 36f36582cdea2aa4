#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dflux/fixed_vec.hpp"
#include "dflux/flux_delta.hpp"
#include "dflux/system_model.hpp"

namespace dflux {

inline constexpr int kMaxDegree = 2;

/// Legendre polynomial L_l(s) and its derivative, l in [0, kMaxDegree].
struct LegendreValue {
  double value;
  double derivative;
};
LegendreValue legendre_eval(int l, double s);

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  /// n-point rule, exact for polynomials of degree 2n - 1.
  static QuadratureRule gauss_legendre(int n_points);
  /// The rule used for a DG space of the given degree: degree + 1 points.
  static QuadratureRule for_degree(int degree);
};

/// Uniform partition of [0, L] with one parameter vector per cell.
class Mesh {
 public:
  Mesh(double length, std::size_t n_cells, std::vector<ThetaVec> theta);

  /// Samples theta_field at the cell centers.
  static Mesh from_field(double length, std::size_t n_cells,
                         const std::function<ThetaVec(double)>& theta_field);

  double length() const { return length_; }
  std::size_t n_cells() const { return n_cells_; }
  double dx() const { return dx_; }
  double center(std::size_t j) const { return (static_cast<double>(j) + 0.5) * dx_; }
  double left_edge(std::size_t j) const { return static_cast<double>(j) * dx_; }
  const ThetaVec& theta(std::size_t j) const { return theta_[j]; }
  std::span<const ThetaVec> thetas() const { return theta_; }

  void validate(const SystemModel& model) const;

 private:
  double length_;
  std::size_t n_cells_;
  double dx_;
  std::vector<ThetaVec> theta_;
};

/// Modal DG coefficients u_j^l (Legendre basis in local coordinates).
class DGState {
 public:
  DGState() = default;
  DGState(std::size_t n_cells, int degree, std::size_t n_components, double time = 0.0);

  std::size_t n_cells() const { return n_cells_; }
  int degree() const { return degree_; }
  std::size_t n_basis() const { return static_cast<std::size_t>(degree_) + 1; }
  std::size_t n_components() const { return n_components_; }

  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  double& coeff(std::size_t j, std::size_t l, std::size_t i) { return data_[index(j, l, i)]; }
  double coeff(std::size_t j, std::size_t l, std::size_t i) const { return data_[index(j, l, i)]; }

  StateVec mode(std::size_t j, std::size_t l) const;
  void set_mode(std::size_t j, std::size_t l, const StateVec& v);
  StateVec average(std::size_t j) const { return mode(j, 0); }

  std::span<double> raw() { return data_; }
  std::span<const double> raw() const { return data_; }

  bool same_shape(const DGState& other) const {
    return n_cells_ == other.n_cells_ && degree_ == other.degree_ &&
           n_components_ == other.n_components_;
  }
  bool all_finite() const;

 private:
  std::size_t index(std::size_t j, std::size_t l, std::size_t i) const {
    return (j * n_basis() + l) * n_components_ + i;
  }

  std::size_t n_cells_ = 0;
  int degree_ = 0;
  std::size_t n_components_ = 0;
  double time_ = 0.0;
  std::vector<double> data_;
};

enum class BoundaryKind { kPeriodic, kPrescribed, kOutflow };
enum class BoundarySideId { kLeft, kRight };

/// Exterior (ghost) state as a function of time, the interior value next to
/// the boundary and the boundary cell's theta.
using ExteriorStateFn =
    std::function<StateVec(double t, const StateVec& interior, const ThetaVec& theta)>;

struct BoundarySide {
  BoundaryKind kind = BoundaryKind::kOutflow;
  ExteriorStateFn exterior;  // kPrescribed only
};

struct BoundarySpec {
  BoundarySide left;
  BoundarySide right;
  /// Both sides become periodic from this time on.
  std::optional<double> periodic_from;

  static BoundarySpec periodic();
  static BoundarySpec outflow();

  void validate() const;
  bool periodic_at(double t) const;

  /// Ghost state beyond the given side at time t. Not valid when periodic.
  StateVec exterior_state(BoundarySideId side, double t, const StateVec& interior,
                          const ThetaVec& theta) const;
};

/// L2 projection of u0 onto the DG space (quadrature of the degree's rule).
DGState project_initial(const std::function<StateVec(double)>& u0, const Mesh& mesh, int degree,
                        std::size_t n_components);

enum class TraceSide { kLeft, kRight };

/// Value of the cell polynomial at the left (s = -1) or right (s = 1) edge.
StateVec evaluate_trace(const DGState& state, std::size_t j, TraceSide side);

/// Polynomial value at local coordinate s in [-1, 1].
StateVec evaluate_local(const DGState& state, std::size_t j, double s);

/// Fluxes through the two domain boundaries produced by one RHS evaluation.
struct BoundaryFluxes {
  StateVec left;   // f-hat at x = 0
  StateVec right;  // f-hat at x = L
};

/// Time derivatives of all coefficients for the semidiscrete DG system.
/// `out` is resized to the state's shape. Model failures are rethrown as
/// SolverError carrying the offending cell.
void semidiscrete_rhs(const DGState& state, const Mesh& mesh, const SystemModel& model,
                      const FluxConfig& flux_cfg, const BoundarySpec& bc, double t, DGState& out,
                      BoundaryFluxes* boundary_fluxes = nullptr);

DGState semidiscrete_rhs(const DGState& state, const Mesh& mesh, const SystemModel& model,
                         const FluxConfig& flux_cfg, const BoundarySpec& bc, double t);

/// Sum over cells of dx times the cell average, per component.
StateVec total_mass(const DGState& state, const Mesh& mesh);

}  // namespace dflux
