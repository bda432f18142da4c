#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "viscofrac/momentum.hpp"

using namespace viscofrac;

namespace {

MomentumStepInput make_input(const Grid& g, const ConstitutiveLaw& law, double dt = 0.01) {
  MomentumStepInput in;
  in.grid = &g;
  in.u_prev = VectorField::Zero(g.dof_count());
  in.u_prev2 = VectorField::Zero(g.dof_count());
  in.v_prev = ScalarField::Ones(g.node_count());
  in.dt = dt;
  in.alpha = 1.0;
  in.law = law;
  in.degradation = DegradationSpec{Section::Two, 1e-3};
  in.load = VectorField::Zero(g.dof_count());
  return in;
}

VectorField random_free(const Grid& g, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  VectorField f(g.dof_count());
  for (auto& x : f) x = u(rng);
  apply_dirichlet(g, f);
  return f;
}

ScalarField random_phase(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScalarField v(g.node_count());
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST(MomentumStep, ZeroDataStaysAtRest) {
  const Grid g = Grid::unit_square(6, FaceMask::from_faces({Face::Left}));
  for (const auto& law : {ConstitutiveLaw::p_growth(2.0), ConstitutiveLaw::p_growth(3.0),
                          ConstitutiveLaw::regularized(1.0, 100)}) {
    const auto res = momentum_step(make_input(g, law), NewtonConfig{});
    EXPECT_EQ(res.u.norm(), 0.0);
    EXPECT_LE(res.iterations, 1);
    EXPECT_EQ(res.max_strain_norm, 0.0);
  }
}

TEST(MomentumStep, InputValidation) {
  const Grid g = Grid::unit_square(4, FaceMask::from_faces({Face::Left}));
  auto in = make_input(g, ConstitutiveLaw::p_growth(2.0));
  in.dt = 0.0;
  EXPECT_THROW(in.validate(), std::invalid_argument);
  in = make_input(g, ConstitutiveLaw::p_growth(2.0));
  in.load.resize(3);
  EXPECT_THROW(in.validate(), std::invalid_argument);
  in = make_input(g, ConstitutiveLaw::p_growth(2.0));
  in.alpha = -1.0;
  EXPECT_THROW(in.validate(), std::invalid_argument);
}

TEST(MomentumStep, SingleIntervalHandResidual) {
  // Two cells of length 1/2, left end clamped, p = 2 so F^{-1} is the identity.
  const Grid g = Grid::unit_interval(2, FaceMask::from_faces({Face::Left}));
  auto in = make_input(g, ConstitutiveLaw::p_growth(2.0), 0.1);
  in.u_prev << 0.0, 0.02, 0.05;
  in.u_prev2 << 0.0, 0.01, 0.03;
  in.v_prev << 1.0, 0.5, 0.0;
  in.load << 0.0, 0.3, 0.7;
  VectorField u(3);
  u << 0.0, 0.04, 0.09;
  const double dt = 0.1, h = 0.5, eta = 1e-3;
  const double b0 = 0.5 * ((1.0 + eta) + (0.25 + eta)), b1 = 0.5 * ((0.25 + eta) + eta);
  const double s0 = b0 * ((0.04 - 0.02) / dt / h + 0.04 / h);
  const double s1 = b1 * (((0.09 - 0.05) - (0.04 - 0.02)) / dt / h + (0.09 - 0.04) / h);
  const double r1 = 0.5 * (0.04 - 0.04 + 0.01) / (dt * dt) + s0 - s1 - 0.3;
  const double r2 = 0.25 * (0.09 - 0.10 + 0.03) / (dt * dt) + s1 - 0.7;
  const VectorField r = momentum_residual(in, u);
  EXPECT_EQ(r[0], 0.0);
  EXPECT_NEAR(r[1], r1, 1e-12);
  EXPECT_NEAR(r[2], r2, 1e-12);
}

TEST(MomentumStep, LinearCaseMatchesDenseOracle) {
  const Grid g = Grid::unit_square(8, FaceMask::from_faces({Face::Left}));
  const double dt = 0.02;
  const int steps = 10;
  std::mt19937_64 rng(17);
  std::vector<Eigen::VectorXd> vs, loads;
  for (int m = 0; m <= steps; ++m) {
    vs.push_back(random_phase(g, rng));
    loads.push_back(oracle::right_face_load(g, 0.5 * m * dt, -0.2 * m * dt));
  }
  const auto ref = oracle::linear_kv_trajectory(g, dt, 1.0, 1e-3, vs, loads);
  VectorField u1 = VectorField::Zero(g.dof_count()), u2 = u1;
  for (int m = 1; m <= steps; ++m) {
    auto in = make_input(g, ConstitutiveLaw::p_growth(2.0), dt);
    in.u_prev = u1;
    in.u_prev2 = u2;
    in.v_prev = vs[m - 1];
    in.load = loads[m];
    const auto res = momentum_step(in, NewtonConfig{});
    EXPECT_LE((res.u - ref[m]).cwiseAbs().maxCoeff(), 1e-8) << "step " << m;
    u2 = u1;
    u1 = res.u;
  }
}

TEST(MomentumStep, RegularizedNewtonConvergesQuadratically) {
  const Grid g = Grid::unit_square(8, FaceMask::from_faces({Face::Left}));
  auto in = make_input(g, ConstitutiveLaw::regularized(1.0, 100), 0.05);
  in.load = oracle::right_face_load(g, 0.6, 0.1);
  const auto res = momentum_step(in, NewtonConfig{});
  ASSERT_LE(res.iterations, 8);
  ASSERT_GE(res.residual_history.size(), 3u);
  const auto& h = res.residual_history;
  EXPECT_LE(h.back(), 1e-10 + 1e-12 * h.front());
  // Once in the asymptotic regime the residual roughly squares.
  bool seen = false;
  for (size_t k = 1; k < h.size(); ++k)
    if (h[k - 1] < 1e-2 && h[k - 1] > 1e-13) {
      seen = true;
      EXPECT_LE(h[k], 1e3 * h[k - 1] * h[k - 1] + 1e-14) << k;
    }
  EXPECT_TRUE(seen);
}

TEST(MomentumStep, SolutionIndependentOfStartingGuess) {
  const Grid g = Grid::unit_square(6, FaceMask::from_faces({Face::Left}));
  std::mt19937_64 rng(3);
  for (const auto& law : {ConstitutiveLaw::p_growth(1.5), ConstitutiveLaw::p_growth(3.0),
                          ConstitutiveLaw::regularized(0.5, 100)}) {
    auto in = make_input(g, law, 0.05);
    in.v_prev = random_phase(g, rng);
    in.load = oracle::right_face_load(g, 0.3, -0.2);
    const auto a = momentum_step(in, NewtonConfig{});
    const VectorField guess = random_free(g, rng, 0.01);
    const auto b = momentum_step(in, NewtonConfig{}, &guess);
    EXPECT_LE((a.u - b.u).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(MomentumStep, ResidualOperatorIsStrictlyMonotone) {
  const Grid g = Grid::unit_square(5, FaceMask::from_faces({Face::Left, Face::Bottom}));
  std::mt19937_64 rng(8);
  for (const auto& law : {ConstitutiveLaw::p_growth(1.5), ConstitutiveLaw::p_growth(2.0),
                          ConstitutiveLaw::p_growth(3.0), ConstitutiveLaw::regularized(1.0, 10)}) {
    auto in = make_input(g, law, 0.05);
    in.v_prev = random_phase(g, rng);
    in.u_prev = random_free(g, rng, 0.005);
    for (int trial = 0; trial < 30; ++trial) {
      const VectorField u = random_free(g, rng, 0.01), w = random_free(g, rng, 0.01);
      const double q = (momentum_residual(in, u) - momentum_residual(in, w)).dot(u - w);
      EXPECT_GT(q, 0.0);
    }
  }
}

TEST(MomentumStep, StressIsInverseResponseOfStrainArgument) {
  const Grid g = Grid::unit_square(6, FaceMask::from_faces({Face::Left}));
  const auto law = ConstitutiveLaw::regularized(1.0, 10);
  auto in = make_input(g, law, 0.05);
  in.load = oracle::right_face_load(g, 0.4, 0.3);
  const auto res = momentum_step(in, NewtonConfig{});
  const auto eps = sym_gradient(g, (res.u - in.u_prev) / in.dt + in.alpha * res.u);
  double max_strain = 0.0;
  for (int c = 0; c < g.cell_count(); ++c) {
    const SymTensor ref = oracle::numeric_inverse(law, eps[c]);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(res.stress[c].packed(k), ref.packed(k), 1e-9 * (1.0 + ref.norm()));
    max_strain = std::max(max_strain, eps[c].norm());
  }
  EXPECT_NEAR(res.max_strain_norm, max_strain, 1e-14);
}

TEST(MomentumStep, TangentMatchesFiniteDifferences) {
  const Grid g = Grid::unit_square(4, FaceMask::from_faces({Face::Left}));
  std::mt19937_64 rng(12);
  for (const auto& law : {ConstitutiveLaw::p_growth(3.0), ConstitutiveLaw::regularized(1.0, 10)}) {
    auto in = make_input(g, law, 0.05);
    in.v_prev = random_phase(g, rng);
    const VectorField u = random_free(g, rng, 0.02);
    const SparseMatrix k = momentum_tangent(in, u);
    for (int trial = 0; trial < 5; ++trial) {
      const VectorField d = random_free(g, rng, 1.0);
      const double h = 1e-6;
      const VectorField fd = (momentum_residual(in, u + h * d) - momentum_residual(in, u - h * d)) / (2 * h);
      const VectorField an = k * d;
      for (int n = 0; n < g.node_count(); ++n) {
        if (g.is_dirichlet_node(n)) continue;
        for (int c = 0; c < 2; ++c) EXPECT_NEAR(an[2 * n + c], fd[2 * n + c], 1e-5 * (1.0 + an.norm()));
      }
    }
  }
}

TEST(MomentumStep, StrainBoundViolationIsReported) {
  const Grid g = Grid::unit_square(4, FaceMask::from_faces({Face::Left}));
  auto in = make_input(g, ConstitutiveLaw::strain_limiting(1.0), 0.05);
  VectorField u = VectorField::Zero(g.dof_count());
  for (int n = 0; n < g.node_count(); ++n) u[2 * n] = g.node_coords(n)[0];
  EXPECT_THROW(momentum_residual(in, u), StrainBoundError);
}

TEST(MomentumStep, CellDegradationAveragesNodes) {
  const Grid g = Grid::unit_square(2, FaceMask::from_faces({Face::Left}));
  ScalarField v = ScalarField::Zero(g.node_count());
  v[g.node(0, 0)] = 1.0;
  const auto b = cell_degradation(g, DegradationSpec{Section::Two, 0.01}, v);
  EXPECT_NEAR(b[0], 0.25 + 0.01, 1e-15);
  EXPECT_NEAR(b[3], 0.01, 1e-15);
}
