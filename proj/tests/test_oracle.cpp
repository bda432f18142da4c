#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "test_util.hpp"

using namespace viscofrac;
using namespace viscofrac::testing;

TEST(Oracle, MagnitudeExamples) {
  EXPECT_DOUBLE_EQ(oracle::magnitude(ConstitutiveLaw::p_growth(2.0), 0.7), 0.7);
  EXPECT_DOUBLE_EQ(oracle::magnitude(ConstitutiveLaw::p_growth(3.0), 2.0), 4.0);
  EXPECT_DOUBLE_EQ(oracle::magnitude(ConstitutiveLaw::strain_limiting(1.0), 1.0), 0.5);
  EXPECT_NEAR(oracle::magnitude(ConstitutiveLaw::regularized(1.0, 10), 1.0), 0.6, 1e-15);
}

TEST(Oracle, NumericInverseRoundTrip) {
  std::mt19937_64 rng(1);
  for (const auto& [name, law] : all_laws())
    for (int i = 0; i < 20; ++i) {
      const SymTensor t = random_tensor(2, rng, log_uniform(rng, 1e-3, 1e2));
      const double m = oracle::magnitude(law, t.norm());
      const SymTensor s = (m / t.norm()) * t;
      EXPECT_LE(max_abs_diff(oracle::numeric_inverse(law, s), t), 1e-9 * (1.0 + t.norm())) << name;
    }
  const SymTensor big = SymTensor::from_matrix((Eigen::Matrix2d() << 1.0, 0, 0, 0.5).finished());
  EXPECT_THROW(oracle::numeric_inverse(ConstitutiveLaw::strain_limiting(1.0), big), std::domain_error);
}

TEST(Oracle, QuadratureExamples) {
  EXPECT_NEAR(oracle::potential_quadrature(ConstitutiveLaw::p_growth(2.0), 3.0), 4.5, 1e-12);
  EXPECT_NEAR(oracle::potential_quadrature(ConstitutiveLaw::strain_limiting(1.0), 1.0), 1.0 - std::log(2.0), 1e-12);
  EXPECT_NEAR(oracle::conjugate_quadrature(ConstitutiveLaw::p_growth(3.0), 1.0), 2.0 / 3.0, 1e-12);
}

TEST(Oracle, FiniteDifferenceJacobianIsBounded) {
  // |dF/dT| <= 3 entrywise for the strain-limiting family.
  std::mt19937_64 rng(2);
  for (double a : {0.5, 1.0, 2.0}) {
    const auto law = ConstitutiveLaw::strain_limiting(a);
    for (int i = 0; i < 1000; ++i) {
      const SymTensor t = random_tensor(2, rng, log_uniform(rng, 1e-2, 1e2));
      const auto j = oracle::fd_jacobian(law, t, 1e-6 * (1.0 + t.norm()));
      double m = 0.0;
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
          for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s) m = std::max(m, std::abs(j(p, q, r, s)));
      EXPECT_LE(m, 3.0);
    }
  }
}

TEST(Oracle, CoordinateDescentDecreasesObjective) {
  const Grid g(2, {5, 5}, {1.0, 1.0}, FaceMask::from_faces({Face::Left}));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Section s : {Section::Two, Section::Three}) {
    PhaseStepInput in;
    in.grid = &g;
    in.section = s;
    in.rate_term = s == Section::Three;
    in.eps_pf = 0.5;
    in.elastic_density.resize(g.cell_count());
    for (auto& x : in.elastic_density) x = 3.0 * u(rng);
    in.v_prev = Eigen::VectorXd::Ones(g.node_count());
    const Eigen::VectorXd v = oracle::brute_phasefield(in);
    EXPECT_LT(oracle::brute_objective(in, v), oracle::brute_objective(in, in.v_prev));
    EXPECT_LE((v - in.v_prev).maxCoeff(), 0.0);
  }
}

TEST(Oracle, ShuffledSumIsASum) {
  std::vector<double> t(1000);
  for (int i = 0; i < 1000; ++i) t[i] = i + 1;
  EXPECT_EQ(oracle::random_order_sum(t, 1), 500500.0);
  EXPECT_EQ(oracle::random_order_sum(t, 1), oracle::random_order_sum(t, 1));
}

TEST(Oracle, LinearTrajectoryStaysAtRestWithoutLoad) {
  const Grid g = Grid::unit_square(4, FaceMask::from_faces({Face::Left}));
  std::vector<Eigen::VectorXd> v(4, Eigen::VectorXd::Ones(g.node_count())), l(4, Eigen::VectorXd::Zero(g.dof_count()));
  for (const auto& u : oracle::linear_kv_trajectory(g, 0.1, 1.0, 1e-3, v, l)) EXPECT_EQ(u.norm(), 0.0);
  const auto right = oracle::right_face_load(g, 2.0, 0.0);
  EXPECT_NEAR(right.sum(), 2.0, 1e-14);
}
