#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "padicrd/errors.hpp"
#include "padicrd/operators.hpp"
#include "padicrd/simulate.hpp"

using namespace padicrd;

namespace {

double sup(const Eigen::VectorXd& x) { return x.cwiseAbs().maxCoeff(); }

SimConfig base_config(double eps, double d, double t_end, double dt) {
  SimConfig c;
  c.eps = eps;
  c.d = d;
  c.t_end = t_end;
  c.dt = dt;
  c.perturbation.kind = Perturbation::Kind::none;
  return c;
}

const LevelGrid& k4_grid(unsigned m) {
  static const auto e = embed(Graph::complete(4));
  static std::map<unsigned, LevelGrid> cache;
  return cache.try_emplace(m, e, m).first->second;
}

}  // namespace

TEST(InitialCondition, ZeroDeltaIsSteadyState) {
  auto cfg = base_config(0.3, 9, 1, 1e-3);
  cfg.perturbation.kind = Perturbation::Kind::random_uniform;
  cfg.perturbation.delta = 0.0;
  const auto s = initial_condition(brusselator(2, 4.5), cfg, k4_grid(2));
  EXPECT_EQ(s.u, Eigen::VectorXd::Constant(4, 2.0));
  EXPECT_EQ(s.v, Eigen::VectorXd::Constant(4, 2.25));
}

TEST(InitialCondition, EigenmodeDirection) {
  auto cfg = base_config(0.3, 9, 1, 1e-3);
  cfg.perturbation.kind = Perturbation::Kind::eigenmode;
  cfg.perturbation.kappa = -4.0;
  cfg.perturbation.amplitude = 1e-3;
  const auto s = initial_condition(brusselator(2, 4.5), cfg, k4_grid(2));
  const Eigen::VectorXd w = s.u.array() - 2.0;
  EXPECT_NEAR(sup(w), 1e-3, 1e-15);
  const auto l = build_graph_laplacian(k4_grid(2).embedding()).entries;
  EXPECT_LT(sup(l * w + 4.0 * w), 1e-15);
  cfg.perturbation.kappa = -2.0;
  EXPECT_THROW(initial_condition(brusselator(2, 4.5), cfg, k4_grid(2)), ArgumentError);
}

TEST(InitialCondition, WaveletDirection) {
  auto cfg = base_config(0.9, 20, 1, 1e-3);
  cfg.perturbation.kind = Perturbation::Kind::wavelet;
  cfg.perturbation.vertex = 1;
  const auto& grid = k4_grid(3);
  const auto s = initial_condition(brusselator(2, 4.8), cfg, grid);
  const Eigen::VectorXd w = s.u.array() - 2.0;
  EXPECT_NEAR(sup(w), 1e-3, 1e-15);
  EXPECT_LT(sup(build_full_L_M(grid).entries * w + 3.0 * w), 1e-15);
  EXPECT_EQ(w[0], 0.0);
}

TEST(InitialCondition, SeededAndBoxChecked) {
  auto cfg = base_config(0.3, 9, 1, 1e-3);
  cfg.perturbation.kind = Perturbation::Kind::random_uniform;
  cfg.seed = 99;
  const auto a = initial_condition(brusselator(2, 4.5), cfg, k4_grid(3));
  const auto b = initial_condition(brusselator(2, 4.5), cfg, k4_grid(3));
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.v, b.v);
  EXPECT_LE(sup(a.u.array() - 2.0), 1e-4);
  cfg.perturbation.delta = 50.0;
  EXPECT_THROW(initial_condition(brusselator(2, 4.5), cfg, k4_grid(3)), ArgumentError);
}

TEST(Integrate, PureDiffusionMatchesSemigroup) {
  const auto zero = parse_kinetics("0", "0", {}, ValidityBox{-100, 100});
  const auto l = build_full_L_M(k4_grid(3)).entries;
  const auto ops = diffusion_pair(l, 0.7, 2.0);
  SimState init{0, Eigen::VectorXd::LinSpaced(8, -1, 1), Eigen::VectorXd::LinSpaced(8, 2, 0)};
  auto cfg = base_config(0.7, 2.0, 1.0, 1e-3);
  const Eigen::VectorXd exact_u = oracle::taylor_exp(0.7 * l, 1.0) * init.u;
  const Eigen::VectorXd exact_v = oracle::taylor_exp(1.4 * l, 1.0) * init.v;
  const auto rk = integrate(zero, ops, init, cfg).states.back();
  EXPECT_LE(sup(rk.u - exact_u), 1e-6);
  EXPECT_LE(sup(rk.v - exact_v), 1e-6);
  cfg.integrator = Integrator::exponential_euler;
  const auto ee = integrate(zero, ops, init, cfg).states.back();
  EXPECT_LE(sup(ee.u - exact_u), 1e-10);
  EXPECT_LE(sup(ee.v - exact_v), 1e-10);
}

TEST(Integrate, MassConservedUnderPureDiffusion) {
  const auto zero = parse_kinetics("0", "0", {}, ValidityBox{-100, 100});
  const auto ops = diffusion_pair(build_full_L_M(refine(embed(Graph::path(5)), 5)).entries, 1.0, 3.0);
  const auto n = ops.u_op.rows();
  SimState init{0, Eigen::VectorXd::LinSpaced(n, 0, 1).array().square(), Eigen::VectorXd::LinSpaced(n, 1, 0)};
  auto cfg = base_config(1.0, 3.0, 2.0, 1e-3);
  cfg.stride = 100;
  for (const auto& s : integrate(zero, ops, init, cfg).states) {
    EXPECT_NEAR(s.u.sum(), init.u.sum(), 1e-8);
    EXPECT_NEAR(s.v.sum(), init.v.sum(), 1e-8);
  }
}

TEST(Integrate, SteadyStateIsFixed) {
  const auto m = brusselator(2, 4.5);
  const auto ops = diffusion_pair(build_full_L_M(k4_grid(3)).entries, 0.3, 9);
  SimState init{0, Eigen::VectorXd::Constant(8, 2.0), Eigen::VectorXd::Constant(8, 2.25)};
  const auto t = integrate(m, ops, init, base_config(0.3, 9, 2.0, 1e-3));
  for (const auto& s : t.states) {
    EXPECT_LE(sup(s.u.array() - 2.0), 1e-12);
    EXPECT_LE(sup(s.v.array() - 2.25), 1e-12);
  }
}

TEST(Integrate, Rk4IsFourthOrder) {
  const auto m = brusselator(1, 1.5);
  const auto ops = diffusion_pair(build_full_L_M(k4_grid(3)).entries, 0.3, 1.0);
  SimState init{0, 1.0 + 0.3 * Eigen::VectorXd::LinSpaced(8, -1, 1).array(),
                1.5 - 0.2 * Eigen::VectorXd::LinSpaced(8, -1, 1).array()};
  auto run = [&](double dt) { return integrate(m, ops, init, base_config(0.3, 1.0, 2.0, dt)).states.back(); };
  const auto ref = run(0.0025 / 4);
  const double e1 = sup(run(0.05).u - ref.u), e2 = sup(run(0.025).u - ref.u);
  EXPECT_NEAR(e1 / e2, 16.0, 16.0 * 0.3);
}

TEST(Integrate, Deterministic) {
  auto cfg = base_config(0.3, 9, 1.0, 1e-3);
  cfg.perturbation.kind = Perturbation::Kind::random_uniform;
  cfg.seed = 5;
  const auto m = brusselator(2, 4.5);
  const auto ops = diffusion_pair(build_full_L_M(k4_grid(4)).entries, 0.3, 9);
  const auto a = integrate(m, ops, initial_condition(m, cfg, k4_grid(4)), cfg);
  const auto b = integrate(m, ops, initial_condition(m, cfg, k4_grid(4)), cfg);
  ASSERT_EQ(a.states.size(), b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    EXPECT_EQ(a.states[i].u, b.states[i].u);
    EXPECT_EQ(a.states[i].v, b.states[i].v);
  }
}

TEST(Integrate, BlowUpHaltsWithTmax) {
  const auto m = parse_kinetics("u^2", "0", {}, ValidityBox{-1e9, 1e9});
  const auto ops = diffusion_pair(build_graph_laplacian(k4_grid(2).embedding()).entries, 1.0, 1.0);
  SimState init{0, Eigen::VectorXd::Ones(4), Eigen::VectorXd::Zero(4)};
  auto cfg = base_config(1.0, 1.0, 2.0, 1e-3);
  cfg.enforce_box = false;
  const auto t = integrate(m, ops, init, cfg);
  EXPECT_TRUE(t.halted);
  EXPECT_GT(t.t_max, 0.99);
  EXPECT_LT(t.t_max, 1.01);
  auto boxed = base_config(1.0, 1.0, 2.0, 1e-3);
  const auto tb = integrate(m.with_box({-1, 5}), ops, SimState{0, 0.5 * Eigen::VectorXd::Ones(4), Eigen::VectorXd::Zero(4)}, boxed);
  EXPECT_TRUE(tb.halted);
  EXPECT_LT(tb.t_max, 2.0);
}

TEST(Integrate, NonFiniteRaisesWithLastGoodState) {
  const auto m = parse_kinetics("1/(u-1)", "0", {}, ValidityBox{-10, 10});
  const auto ops = diffusion_pair(build_graph_laplacian(k4_grid(2).embedding()).entries, 1.0, 1.0);
  SimState init{0, Eigen::VectorXd::Ones(4), Eigen::VectorXd::Zero(4)};
  try {
    integrate(m, ops, init, base_config(1.0, 1.0, 1.0, 1e-3));
    FAIL() << "no error";
  } catch (const IntegrationError& e) {
    EXPECT_EQ(e.last_good_state().u, init.u);
  }
}

TEST(Picard, LinearKineticsMatchClosedForm) {
  const auto m = parse_kinetics("-u", "-v", {}, ValidityBox{-10, 10});
  const auto l = build_full_L_M(k4_grid(3)).entries;
  SimState init{0, Eigen::VectorXd::LinSpaced(8, 0, 1), Eigen::VectorXd::LinSpaced(8, 1, 0)};
  auto cfg = base_config(0.5, 2.0, 0.25, 1e-3);
  const auto rep = picard_verify(m, l, init, cfg, 8);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(8, 8);
  EXPECT_LE(sup(rep.u_final - oracle::taylor_exp(0.5 * l - id, 0.25) * init.u), 1e-6);
  EXPECT_LE(sup(rep.v_final - oracle::taylor_exp(1.0 * l - id, 0.25) * init.v), 1e-6);
}

TEST(Picard, IncrementsShrinkForBrusselator) {
  const auto m = brusselator(1, 1.5);
  const auto l = build_graph_laplacian(k4_grid(2).embedding()).entries;
  SimState init{0, Eigen::Vector4d(1.01, 0.99, 1.0, 1.005), Eigen::Vector4d(1.5, 1.49, 1.51, 1.5)};
  const auto rep = picard_verify(m, l, init, base_config(0.3, 1.0, 0.1, 1e-3), 2);
  ASSERT_EQ(rep.increments.size(), 2u);
  EXPECT_LT(rep.increments[1], rep.increments[0]);
  EXPECT_THROW(picard_verify(m, l, init, base_config(0.3, 1.0, 0.1, 1e-3), 0), ArgumentError);
}

TEST(Convergence, VertexConstantDatumHasZeroGaps) {
  ContinuousDatum datum;
  datum.kind = ContinuousDatum::Kind::vertex_constant;
  datum.vertex_values = {0.1, -0.2, 0.05, 0.0};
  const auto table = convergence_study(brusselator(1, 1.5), embed(Graph::complete(4)), datum, {2, 3, 4},
                                       base_config(0.3, 1.0, 0.5, 1e-3));
  for (const auto& r : table.rows) EXPECT_LE(r.gap, 1e-12);
}

TEST(Convergence, InitialTimeGapsAreProjectionErrors) {
  const ContinuousDatum datum;
  const auto table = convergence_study(brusselator(1, 1.5), embed(Graph::complete(4)), datum, {2, 3, 4, 5},
                                       base_config(0.3, 1.0, 0.0, 1e-3));
  for (const auto& r : table.rows) {
    EXPECT_EQ(r.gap, r.projection_error);
    // sampling the digit weight at level M misses digits M..5: 0.5 * sum 2^{-i-1}, i = M..4
    EXPECT_NEAR(r.gap, 0.5 * (std::pow(2.0, -static_cast<int>(r.level)) - std::pow(2.0, -5)), 1e-15);
  }
}

TEST(Replica, CompleteGraphReport) {
  const auto r = replica_compare(embed(Graph::complete(4)), 3, 1.0);
  EXPECT_FALSE(r.identification_supported);
  EXPECT_NEAR(r.spectrum_distance, 1.5, 1e-10);
  EXPECT_LE(r.nesting_error, 1e-12);
  EXPECT_LE(r.replica_block_identity_error, 1e-15);
  EXPECT_EQ(r.scaled_diagonal_error, 0.0);
  EXPECT_NEAR(r.scaled_offdiag_error, 0.5, 1e-15);
  EXPECT_GT(r.trajectory_distance.back(), 1e-3);
  EXPECT_THROW(replica_compare(embed(Graph::complete(4)), 2, 1.0), ArgumentError);
}

TEST(GrowthFit, RecoversExponential) {
  std::vector<double> t, a;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(0.1 * i);
    a.push_back(1e-5 * std::exp(0.8 * t.back()));
  }
  const auto fit = fit_growth_rate(t, a, 1e-4, 1e-1);
  ASSERT_TRUE(fit.has_value());
  EXPECT_NEAR(fit->rate, 0.8, 1e-10);
  EXPECT_NEAR(fit->r2, 1.0, 1e-12);
  EXPECT_FALSE(fit_growth_rate(t, a, 1.0, 2.0).has_value());
}

TEST(Pattern, HomogeneousTrajectory) {
  const auto m = brusselator(2, 4.5);
  const auto& grid = k4_grid(3);
  const auto ops = diffusion_pair(build_full_L_M(grid).entries, 0.3, 9);
  SimState init{0, Eigen::VectorXd::Constant(8, 2.0), Eigen::VectorXd::Constant(8, 2.25)};
  const auto t = integrate(m, ops, init, base_config(0.3, 9, 1.0, 1e-3));
  const auto r = pattern_report(t, grid, {2.0, 2.25}, 1e-4, m.box());
  EXPECT_EQ(r.verdict, PatternVerdict::homogeneous);
  EXPECT_EQ(r.clusters, 4);
  for (const auto& mode : r.modes) {
    for (double a : mode.amplitude) EXPECT_LE(a, 1e-10);
  }
}
