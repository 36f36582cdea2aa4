#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dflux/errors.hpp"
#include "dflux/flux_delta.hpp"
#include "dflux/model_elastic.hpp"
#include "dflux/model_traffic.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace dflux;

namespace {

ThetaVec th(std::initializer_list<double> v) { return ThetaVec(v); }

}  // namespace

TEST(ThetaIntermediate, Rules) {
  const ThetaVec a = th({1, 1}), b = th({3, 3});
  EXPECT_EQ(theta_intermediate(ThetaBarRule::kRight, a, b), b);
  EXPECT_EQ(theta_intermediate(ThetaBarRule::kLeft, a, b), a);
  EXPECT_EQ(theta_intermediate(ThetaBarRule::kArithmeticMean, a, b), th({2, 2}));
  for (auto rule : {ThetaBarRule::kLeft, ThetaBarRule::kRight, ThetaBarRule::kArithmeticMean}) {
    EXPECT_EQ(theta_intermediate(rule, a, a), a);
  }
}

TEST(FluxConfig, ParsingAndValidation) {
  EXPECT_EQ(parse_classical_solver("llf"), ClassicalSolver::kLocalLaxFriedrichs);
  EXPECT_EQ(parse_classical_solver("godunov-scalar"), ClassicalSolver::kGodunovScalar);
  EXPECT_EQ(parse_theta_bar_rule("mean"), ThetaBarRule::kArithmeticMean);
  EXPECT_EQ(parse_theta_bar_rule(to_string(ThetaBarRule::kLeft)), ThetaBarRule::kLeft);
  EXPECT_THROW(parse_classical_solver("roe"), ConfigError);
  EXPECT_THROW(parse_theta_bar_rule("geometric"), ConfigError);
  FluxConfig cfg;
  cfg.solver = ClassicalSolver::kGodunovScalar;
  EXPECT_THROW(cfg.validate(TrafficModel(3, {})), ConfigError);
  EXPECT_THROW(cfg.validate(ElasticModel()), ConfigError);
  EXPECT_NO_THROW(cfg.validate(TrafficModel(1, {})));
}

TEST(DeltaMap, IdentityForEqualTheta) {
  const ElasticModel elastic;
  const auto r = delta_map(elastic, StateVec{0.1, 0.3}, th({2, 2}), th({2, 2}), MapSide::kDemand);
  EXPECT_EQ(r.state, (StateVec{0.1, 0.3}));
  EXPECT_EQ(r.gamma, 1.0);
  const TrafficModel traffic(3, {});
  const auto t = delta_map(traffic, StateVec{0.1, 0.2, 0.3}, th({2, .5, .75, 1}), th({2, .5, .75, 1}), MapSide::kSupply);
  EXPECT_EQ(t.state, (StateVec{0.1, 0.2, 0.3}));
  EXPECT_EQ(t.gamma, 1.0);
}

TEST(DeltaMap, ElasticExample) {
  const ElasticModel model(0.3);
  const auto r = delta_map(model, StateVec{0.1, 0.3}, th({1, 1}), th({3, 3}), MapSide::kDemand);
  EXPECT_NEAR(r.state[1], 0.9, 1e-15);
  // 2.7 e^2 + 3 e - 0.103 = 0 has the exact root 1/30 (sqrt(10.1124) = 3.18).
  EXPECT_NEAR(r.state[0], 1.0 / 30.0, 1e-15);
  EXPECT_NEAR(r.state[0], oracle::elastic_strain_root(0.103, 3.0, 0.3), 1e-14);
  EXPECT_EQ(r.gamma, 1.0);
}

TEST(DeltaMap, TrafficCapacityExample) {
  TrafficParams p;
  p.v_free = 1.0;
  p.rho_jam = 1.0;
  const TrafficModel model(1, p);
  // alpha = (b_from a_from) / (b_to a_to) = 2
  const ThetaVec from = th({2, 1}), to = th({1, 1});
  const auto r = delta_map(model, StateVec{2 * 0.3}, from, to, MapSide::kDemand);
  EXPECT_NEAR(r.gamma, 25.0 / 42.0, 1e-14);
  EXPECT_NEAR(r.state[0], 0.5, 1e-14);
  EXPECT_NEAR(model.flux(r.state, to)[0], 0.25, 1e-14);
  const auto bf = oracle::traffic_brute_force(model, StateVec{0.6}, from, to, MapSide::kDemand);
  EXPECT_NEAR(bf.gamma, 25.0 / 42.0, 1e-9);
  EXPECT_NEAR(bf.delta_rho, 0.5, 1e-6);
}

TEST(DeltaMap, TrafficDemandFreeRoot) {
  const TrafficModel model(3, {});
  const ThetaVec from = th({1, 0.5, 0.75, 1}), to = th({2, 0.5, 0.75, 1});
  const StateVec u{0.05, 0.05, 0.05};  // rho = 0.15 < rho*
  ASSERT_EQ(model.lambda1_sign(u, from), Sign::kPositive);
  const auto r = delta_map(model, u, from, to, MapSide::kDemand);
  EXPECT_EQ(r.gamma, 1.0);
  const double rho = model.total_density(r.state, to);
  EXPECT_LE(rho, model.params().critical_density());
  const StateVec f_from = model.flux(u, from), f_to = model.flux(r.state, to);
  for (std::size_t l = 0; l < 3; ++l) EXPECT_NEAR(f_to[l], f_from[l], 1e-13);
  // The other root carries the same flow but flips the sign of lambda_1.
  const double q = model.lane_flow(rho);
  const double other = model.params().rho_jam - rho;
  EXPECT_NEAR(model.lane_flow(other), q, 1e-12);
}

TEST(DeltaMap, FlowIdentitySignsAndCapacityOnRandomStates) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> side_pick(0, 1);
  for (std::size_t m : {1u, 2u, 3u, 5u}) {
    const TrafficModel model(m, {});
    const double q_star = model.params().capacity();
    for (int trial = 0; trial < 300; ++trial) {
      const ThetaVec from = gen::traffic_theta(rng, m), to = gen::traffic_theta(rng, m);
      const StateVec u = gen::traffic_state(rng, m, from[0]);
      const MapSide side = side_pick(rng) ? MapSide::kDemand : MapSide::kSupply;
      const auto r = delta_map(model, u, from, to, side);
      ASSERT_GE(r.gamma, 0.0);
      ASSERT_LE(r.gamma, 1.0);
      ASSERT_TRUE(model.admissible(r.state, to));
      const StateVec f_from = model.flux(u, from), f_to = model.flux(r.state, to);
      for (std::size_t l = 0; l < m; ++l) EXPECT_NEAR(f_to[l], r.gamma * f_from[l], 1e-10);
      const double rho_to = model.total_density(r.state, to);
      EXPECT_LE(model.lane_flow(rho_to), q_star + 1e-12);
      // lambda_1 sign rule with the zero convention per side.
      // At capacity the target sits on rho* up to round-off; treat that as zero.
      const Sign s_from = model.lambda1_sign(u, from);
      const Sign s_to = std::abs(rho_to - model.params().critical_density()) <= 1e-12
                            ? Sign::kZero
                            : model.lambda1_sign(r.state, to);
      if (side == MapSide::kDemand) {
        if (s_from != Sign::kNegative) EXPECT_NE(s_to, Sign::kNegative);
        else EXPECT_NE(s_to, Sign::kPositive);
      } else {
        if (s_from == Sign::kPositive) EXPECT_NE(s_to, Sign::kNegative);
        else EXPECT_NE(s_to, Sign::kPositive);
      }
      // Class fractions follow alpha_l rho_l.
      double wsum = 0.0;
      std::vector<double> w(m);
      for (std::size_t l = 0; l < m; ++l) wsum += (w[l] = u[l] / from[0] * from[l + 1] * from[0] / (to[l + 1] * to[0]));
      if (rho_to > 1e-12 && wsum > 0.0) {
        for (std::size_t l = 0; l < m; ++l) EXPECT_NEAR(r.state[l] / to[0] / rho_to, w[l] / wsum, 1e-10);
      }
    }
  }
}

TEST(DeltaMap, TrafficGammaMaximalOnGrid) {
  std::mt19937_64 rng(7);
  const TrafficModel model(3, {});
  for (int trial = 0; trial < 50; ++trial) {
    const ThetaVec from = gen::traffic_theta(rng, 3), to = gen::traffic_theta(rng, 3);
    const StateVec u = gen::traffic_state(rng, 3, from[0]);
    const MapSide side = trial % 2 ? MapSide::kDemand : MapSide::kSupply;
    const auto r = delta_map(model, u, from, to, side);
    const auto bf = oracle::traffic_brute_force(model, u, from, to, side, 200000);
    EXPECT_NEAR(r.gamma, bf.gamma, 1e-6);
    EXPECT_NEAR(model.total_density(r.state, to), bf.delta_rho, 1e-5);
  }
}

TEST(DeltaMap, JamDensityMapsToZeroFlowKeepingFractions) {
  const TrafficModel model(2, {});
  const ThetaVec from = th({1, 0.5, 1}), to = th({2, 0.5, 1});
  const auto r = delta_map(model, StateVec{0.25, 0.75}, from, to, MapSide::kDemand);
  const StateVec f = model.flux(r.state, to);
  EXPECT_NEAR(f[0], 0.0, 1e-14);
  EXPECT_NEAR(f[1], 0.0, 1e-14);
  if (model.total_density(r.state, to) > 0.0) EXPECT_NEAR(r.state[0] / r.state[1], 0.25 / 0.75 * 1.0, 1e-12);
}

TEST(DeltaMap, RejectsInadmissibleInput) {
  const TrafficModel model(1, {});
  EXPECT_THROW(delta_map(model, StateVec{1.5}, th({1, 1}), th({2, 1}), MapSide::kDemand), InadmissibleState);
  const ElasticModel elastic(0.3);
  // d sigma / d eps = K + 2 beta K^2 eps <= 0
  EXPECT_THROW(delta_map(elastic, StateVec{-5.0, 0.0}, th({1, 1}), th({3, 3}), MapSide::kDemand), InadmissibleState);
}

TEST(LlfFlux, ConsistencyOnRandomStates) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> e(-0.3, 0.5), q(-1.0, 1.0), pos(0.3, 4.0);
  const ElasticModel elastic;
  for (int i = 0; i < 1000; ++i) {
    const ThetaVec t = th({pos(rng), pos(rng)});
    const StateVec u{e(rng), q(rng)};
    if (!elastic.admissible(u, t)) continue;
    const StateVec f = elastic.flux(u, t), g = llf_flux(elastic, u, u, t);
    for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(g[c], f[c], 1e-14 * std::max(1.0, std::abs(f[c])));
  }
  const TrafficModel traffic(3, {});
  for (int i = 0; i < 1000; ++i) {
    const ThetaVec t = gen::traffic_theta(rng, 3);
    const StateVec u = gen::traffic_state(rng, 3, t[0]);
    const StateVec f = traffic.flux(u, t), g = llf_flux(traffic, u, u, t);
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(g[c], f[c], 1e-14 * std::max(1.0, std::abs(f[c])));
  }
}

TEST(LlfFlux, ElasticDissipationUsesSoundSpeed) {
  const ElasticModel model(0.0);
  const ThetaVec t = th({1, 4});  // c = 2 in the linear regime
  const StateVec a{0.01, 0.0}, b{0.02, 0.0};
  const StateVec f = llf_flux(model, a, b, t);
  const double c = std::sqrt(model.stress_slope(0.0, 4.0) / 1.0);
  const StateVec fa = model.flux(a, t), fb = model.flux(b, t);
  EXPECT_NEAR(f[0], 0.5 * (fa[0] + fb[0]) - 0.5 * c * (b[0] - a[0]), 1e-15);
  EXPECT_NEAR(f[1], 0.5 * (fa[1] + fb[1]), 1e-15);
}

TEST(GodunovScalar, MatchesMinMaxOfFluxOnGrid) {
  const TrafficModel model(1, {});
  const ThetaVec t = th({1.5, 0.8});
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(0.0, 1.5);
  for (int i = 0; i < 200; ++i) {
    const StateVec ul{d(rng)}, ur{d(rng)};
    double ref;
    const int n = 20000;
    const double lo = std::min(ul[0], ur[0]), hi = std::max(ul[0], ur[0]);
    ref = ul[0] <= ur[0] ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
      const double v = model.flux(StateVec{lo + (hi - lo) * k / n}, t)[0];
      ref = ul[0] <= ur[0] ? std::min(ref, v) : std::max(ref, v);
    }
    EXPECT_NEAR(godunov_scalar_flux(model, ul, ur, t)[0], ref, 1e-6);
  }
}

TEST(InterfaceFlux, ConsistencyExact) {
  const ElasticModel model;
  for (auto rule : {ThetaBarRule::kLeft, ThetaBarRule::kRight, ThetaBarRule::kArithmeticMean}) {
    FluxConfig cfg;
    cfg.theta_bar = rule;
    const StateVec u{0.07, -0.2};
    EXPECT_EQ(interface_flux(model, u, th({2, 3}), u, th({2, 3}), cfg), model.flux(u, th({2, 3})));
  }
}

TEST(InterfaceFlux, ElasticSteadyPairGivesCommonFlux) {
  const ElasticModel model;
  for (double eps_a : {-0.2, 0.01, 0.1, 0.5}) {
    const double sigma = model.stress(eps_a, 1.0);
    const double eps_b = oracle::elastic_strain_root(sigma, 3.0, model.beta());
    const StateVec a{eps_a, 0.0}, b{eps_b, 0.0};
    for (auto rule : {ThetaBarRule::kLeft, ThetaBarRule::kRight, ThetaBarRule::kArithmeticMean}) {
      FluxConfig cfg;
      cfg.theta_bar = rule;
      const StateVec ab = interface_flux(model, a, th({1, 1}), b, th({3, 3}), cfg);
      const StateVec ba = interface_flux(model, b, th({3, 3}), a, th({1, 1}), cfg);
      for (const auto& f : {ab, ba}) {
        EXPECT_NEAR(f[0], 0.0, 1e-13);
        EXPECT_NEAR(f[1], -sigma, 1e-13);
      }
    }
  }
}

TEST(InterfaceFlux, TrafficStationaryPairGivesCommonFlux) {
  const TrafficModel model(3, {});
  const ThetaVec ta = th({2, 0.5, 0.75, 1}), tb = th({1, 0.25, 0.375, 0.5});
  const StateVec ua{2 * 0.02, 2 * 0.03, 2 * 0.01};
  const auto mapped = delta_map(model, ua, ta, tb, MapSide::kDemand);
  ASSERT_EQ(mapped.gamma, 1.0);
  const StateVec common = model.flux(ua, ta);
  for (auto rule : {ThetaBarRule::kLeft, ThetaBarRule::kRight}) {
    FluxConfig cfg;
    cfg.theta_bar = rule;
    const StateVec f = interface_flux(model, ua, ta, mapped.state, tb, cfg);
    for (std::size_t l = 0; l < 3; ++l) EXPECT_NEAR(f[l], common[l], 1e-12);
  }
  // The unmapped treatment does not see the pair as steady.
  FluxConfig raw;
  raw.delta_mapping = false;
  const StateVec f = interface_flux(model, ua, ta, mapped.state, tb, raw);
  double diff = 0.0;
  for (std::size_t l = 0; l < 3; ++l) diff = std::max(diff, std::abs(f[l] - common[l]));
  EXPECT_GT(diff, 1e-3);
}

TEST(MaxFeasibleGamma, Bisection) {
  EXPECT_NEAR(max_feasible_gamma([](double g) { return g <= 0.37; }), 0.37, 1e-12);
  EXPECT_EQ(max_feasible_gamma([](double) { return true; }), 1.0);
  EXPECT_LT(max_feasible_gamma([](double) { return false; }), 0.0);
}
