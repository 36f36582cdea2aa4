#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "dflux/errors.hpp"
#include "dflux/model_traffic.hpp"
#include "dflux/scenario.hpp"
#include "support/oracles.hpp"

using namespace dflux;

namespace {

const ThetaVec kThetaL{1.0, 0.5, 0.75, 1.0};

/// Jacobian of the flux in u by central differences (the flux is quadratic,
/// so the difference quotient is exact up to round-off).
Eigen::MatrixXd numeric_jacobian(const TrafficModel& m, const StateVec& u, const ThetaVec& th) {
  const std::size_t n = u.size();
  Eigen::MatrixXd J(n, n);
  const double h = 1e-6;
  for (std::size_t k = 0; k < n; ++k) {
    StateVec up = u, dn = u;
    up[k] += h;
    dn[k] -= h;
    const StateVec fp = m.flux(up, th), fm = m.flux(dn, th);
    for (std::size_t i = 0; i < n; ++i) J(i, k) = (fp[i] - fm[i]) / (2 * h);
  }
  return J;
}

}  // namespace

TEST(TrafficModel, Velocity) {
  const TrafficModel m(3, {});
  EXPECT_DOUBLE_EQ(m.velocity(0.0), 40.0);
  EXPECT_DOUBLE_EQ(m.velocity(1.0), 0.0);
  EXPECT_DOUBLE_EQ(m.velocity(0.5), 20.0);
  EXPECT_DOUBLE_EQ(m.lane_flow(0.5), 10.0);
  EXPECT_DOUBLE_EQ(m.params().capacity(), 10.0);
  EXPECT_THROW(m.velocity(-0.01), InadmissibleState);
  EXPECT_THROW(m.velocity(1.01), InadmissibleState);
  // q is maximal at the critical density.
  for (int i = 0; i <= 1000; ++i) EXPECT_LE(m.lane_flow(i / 1000.0), m.lane_flow(0.5));
}

TEST(TrafficModel, Construction) {
  EXPECT_THROW(TrafficModel(0, {}), ConfigError);
  EXPECT_THROW(TrafficModel(2, TrafficParams{-1.0, 1.0}), ConfigError);
  EXPECT_THROW(TrafficModel(2, TrafficParams{40.0, 0.0}), ConfigError);
  const TrafficModel m(3, {});
  EXPECT_NO_THROW(m.validate_theta(kThetaL));
  EXPECT_THROW(m.validate_theta(ThetaVec{1.0, 0.75, 0.5, 1.0}), ConfigError);
  EXPECT_THROW(m.validate_theta(ThetaVec{1.0, 0.5, 0.75, 1.2}), ConfigError);
  EXPECT_THROW(m.validate_theta(ThetaVec{0.0, 0.5, 0.75, 1.0}), ConfigError);
  EXPECT_THROW(m.validate_theta(ThetaVec{1.0, 0.5, 0.75}), ConfigError);
}

TEST(TrafficModel, FluxExamples) {
  const TrafficModel m(3, {});
  const StateVec z = m.flux(StateVec{0, 0, 0}, kThetaL);
  for (double v : z) EXPECT_EQ(v, 0.0);
  const StateVec jam = m.flux(StateVec{0.2, 0.5, 0.3}, kThetaL);
  for (double v : jam) EXPECT_EQ(v, 0.0);
  const StateVec f = m.flux(StateVec{0.02, 0.03, 0.01}, kThetaL);
  EXPECT_NEAR(f[0], 0.5 * 0.02 * 40 * 0.94, 1e-15);
  EXPECT_NEAR(f[1], 0.75 * 0.03 * 40 * 0.94, 1e-15);
  EXPECT_NEAR(f[2], 1.0 * 0.01 * 40 * 0.94, 1e-15);
  // u_l = a rho_l: two lanes double the flux.
  const ThetaVec two{2.0, 0.5, 0.75, 1.0};
  const StateVec f2 = m.flux(m.from_primitive(StateVec{0.02, 0.03, 0.01}, two), two);
  for (int l = 0; l < 3; ++l) EXPECT_NEAR(f2[l], 2 * f[l], 1e-15);
  EXPECT_THROW(m.flux(StateVec{-0.1, 0, 0}, kThetaL), InadmissibleState);
  EXPECT_THROW(m.flux(StateVec{0.5, 0.5, 0.1}, kThetaL), InadmissibleState);
}

TEST(TrafficModel, EigenBoundLimits) {
  const TrafficModel m(3, {});
  const auto [lo0, hi0] = m.eigen_bounds(StateVec{0, 0, 0}, kThetaL);
  EXPECT_DOUBLE_EQ(lo0, 0.5 * 40);
  EXPECT_DOUBLE_EQ(hi0, 40.0);
  const auto [lo1, hi1] = m.eigen_bounds(StateVec{0.2, 0.5, 0.3}, kThetaL);
  EXPECT_EQ(hi1, 0.0);
  EXPECT_LT(lo1, 0.0);
}

TEST(TrafficModel, JacobianSpectrumInterlaces) {
  const TrafficModel m(3, {});
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> d(0.01, 1.0), b(0.05, 1.0), a(0.5, 3.0);
  int checked = 0;
  while (checked < 500) {
    std::vector<double> bs{b(rng), b(rng), b(rng)};
    std::sort(bs.begin(), bs.end());
    if (bs[1] - bs[0] < 1e-2 || bs[2] - bs[1] < 1e-2) continue;
    const ThetaVec th{a(rng), bs[0], bs[1], bs[2]};
    StateVec rho{d(rng), d(rng), d(rng)};
    const double total = d(rng) * 0.98;
    const double s = rho[0] + rho[1] + rho[2];
    for (double& r : rho) r *= total / s;
    const StateVec u = m.from_primitive(rho, th);
    ++checked;

    Eigen::EigenSolver<Eigen::MatrixXd> es(numeric_jacobian(m, u, th));
    std::vector<double> lam;
    for (int i = 0; i < 3; ++i) {
      EXPECT_LT(std::abs(es.eigenvalues()[i].imag()), 1e-9);
      lam.push_back(es.eigenvalues()[i].real());
    }
    std::sort(lam.begin(), lam.end());
    const double v = m.velocity(total);
    const auto [lower, upper] = m.eigen_bounds(u, th);
    const double tol = 1e-7;
    EXPECT_GT(lam[0], lower - tol);
    EXPECT_LT(lam[0], th[1] * v + tol);
    EXPECT_GT(lam[1], th[1] * v - tol);
    EXPECT_LT(lam[1], th[2] * v + tol);
    EXPECT_GT(lam[2], th[2] * v - tol);
    EXPECT_LT(lam[2], upper + tol);
    EXPECT_LT(lam[0], lam[1]);
    EXPECT_LT(lam[1], lam[2]);
    EXPECT_LE(std::max(std::abs(lam[0]), std::abs(lam[2])), m.max_wave_speed(u, th) + tol);
  }
}

TEST(TrafficModel, Lambda1Sign) {
  const TrafficModel m(3, {});
  EXPECT_EQ(m.lambda1_sign(StateVec{0.25, 0.125, 0.125}, kThetaL), Sign::kZero);
  EXPECT_EQ(m.lambda1_sign(StateVec{0.02, 0.03, 0.01}, kThetaL), Sign::kPositive);
  EXPECT_EQ(m.lambda1_sign(StateVec{0.2, 0.3, 0.2}, kThetaL), Sign::kNegative);
  // The criterion is on per-lane density, independent of the lane count.
  const ThetaVec three{3.0, 0.5, 0.75, 1.0};
  EXPECT_EQ(m.lambda1_sign(m.from_primitive(StateVec{0.2, 0.3, 0.2}, three), three), Sign::kNegative);

  // Agrees with the sign of the smallest Jacobian eigenvalue, m = 1.
  const TrafficModel one(1, {});
  for (double rho : {0.1, 0.3, 0.45, 0.55, 0.8}) {
    const ThetaVec th{1.0, 1.0};
    const StateVec u{rho};
    const double lam = numeric_jacobian(one, u, th)(0, 0);
    EXPECT_EQ(one.lambda1_sign(u, th), lam > 0 ? Sign::kPositive : Sign::kNegative);
  }
}

TEST(TrafficModel, PrimitiveAndObservables) {
  const TrafficModel m(3, {});
  const ThetaVec th{2.0, 0.5, 0.75, 1.0};
  const StateVec u = m.from_primitive(StateVec{0.1, 0.2, 0.3}, th);
  EXPECT_DOUBLE_EQ(u[2], 0.6);
  const StateVec o = m.observables(u, th);
  EXPECT_DOUBLE_EQ(o[0], 0.1);
  EXPECT_DOUBLE_EQ(o[2], 0.3);
  EXPECT_EQ(m.observable_names(), (std::vector<std::string>{"rho_1", "rho_2", "rho_3"}));
  EXPECT_THROW(m.from_primitive(StateVec{0.1}, th), ConfigError);
  EXPECT_DOUBLE_EQ(m.total_density(u, th), 0.6);
}

TEST(TrafficModel, AdmissibleSet) {
  const TrafficModel m(2, {});
  const ThetaVec th{1.0, 0.5, 1.0};
  EXPECT_TRUE(m.admissible(StateVec{0.0, 0.0}, th));
  EXPECT_TRUE(m.admissible(StateVec{0.5, 0.5}, th));
  EXPECT_FALSE(m.admissible(StateVec{-1e-6, 0.5}, th));
  EXPECT_FALSE(m.admissible(StateVec{0.5, 0.5 + 1e-6}, th));
  EXPECT_FALSE(m.admissible(StateVec{std::nan(""), 0.0}, th));
}

TEST(TrafficRiemann, CaseParameters) {
  const Scenario a = traffic_riemann_scenario("4a");
  EXPECT_EQ(a.cells, 800u);
  EXPECT_DOUBLE_EQ(a.length, 10000.0);
  EXPECT_DOUBLE_EQ(a.t_end, 400.0);
  EXPECT_DOUBLE_EQ(a.courant, 0.3);
  EXPECT_EQ(a.flux.theta_bar, ThetaBarRule::kRight);
  const auto& th = std::get<TwoPieceField>(a.theta);
  EXPECT_DOUBLE_EQ(th.x0, 3000.0);
  EXPECT_DOUBLE_EQ(th.left[0] / th.right[0], 2.0);
  EXPECT_EQ(std::vector<double>(th.left.begin() + 1, th.left.end()), (std::vector<double>{0.5, 0.75, 1.0}));
  EXPECT_EQ(std::vector<double>(th.right.begin() + 1, th.right.end()), (std::vector<double>{0.25, 0.375, 0.5}));
  const auto& init = std::get<TwoPieceField>(a.initial);
  EXPECT_EQ(init.left, (std::vector<double>{0.02, 0.03, 0.01}));
  EXPECT_EQ(init.right, (std::vector<double>{0.2, 0.08, 0.15}));

  const Scenario c = traffic_riemann_scenario("5a");
  EXPECT_DOUBLE_EQ(std::get<TwoPieceField>(c.theta).x0, 4000.0);
  EXPECT_EQ(c.flux.theta_bar, ThetaBarRule::kLeft);
  EXPECT_EQ(std::get<TwoPieceField>(c.initial).left, (std::vector<double>{0.1, 0.15, 0.05}));
  EXPECT_EQ(std::get<TwoPieceField>(c.initial).right, (std::vector<double>{0.15, 0.1, 0.2}));
  const auto& ct = std::get<TwoPieceField>(c.theta);
  EXPECT_DOUBLE_EQ(ct.left[0] / ct.right[0], 3.0);

  const Scenario d = traffic_riemann_scenario("5b");
  const auto& dt = std::get<TwoPieceField>(d.theta);
  EXPECT_DOUBLE_EQ(dt.x0, 4500.0);
  EXPECT_DOUBLE_EQ(dt.left[0] / dt.right[0], 0.4);
  EXPECT_EQ(std::get<TwoPieceField>(d.initial).left, (std::vector<double>{0.1, 0.2, 0.3}));
  EXPECT_EQ(std::get<TwoPieceField>(d.initial).right, (std::vector<double>{0.1, 0.25, 0.2}));

  EXPECT_THROW(traffic_riemann_scenario("6c"), ConfigError);
  for (const char* id : {"4a", "4b", "5a", "5b"}) EXPECT_NO_THROW(traffic_riemann_scenario(id).validate());
}

TEST(TrafficRiemann, InterfaceFallsOnCellEdge) {
  for (const char* id : {"4a", "4b", "5a", "5b"}) {
    const Scenario s = traffic_riemann_scenario(id);
    const Mesh mesh = make_mesh(s);
    const double x0 = std::get<TwoPieceField>(s.theta).x0;
    const std::size_t c = static_cast<std::size_t>(std::llround(x0 / mesh.dx()));
    EXPECT_NE(mesh.theta(c - 1)[0], mesh.theta(c)[0]) << id;
    EXPECT_EQ(mesh.theta(c - 2), mesh.theta(c - 1)) << id;
    EXPECT_EQ(mesh.theta(c), mesh.theta(c + 1)) << id;
  }
}
