#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "viscofrac/field_ops.hpp"

using namespace viscofrac;

namespace {

Grid square(int n) { return Grid::unit_square(n, FaceMask::from_faces({Face::Left})); }

VectorField sample(const Grid& g, const std::function<std::array<double, 2>(double, double)>& f) {
  VectorField u(g.dof_count());
  for (int n = 0; n < g.node_count(); ++n) {
    const auto x = g.node_coords(n);
    const auto v = f(x[0], x[1]);
    for (int c = 0; c < g.dim(); ++c) u[n * g.dim() + c] = v[c];
  }
  return u;
}

VectorField random_field(const Grid& g, std::mt19937_64& rng, bool clamp) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorField f(g.dof_count());
  for (auto& x : f) x = u(rng);
  if (clamp) apply_dirichlet(g, f);
  return f;
}

}  // namespace

TEST(Grid, RejectsDegenerateConfigurations) {
  EXPECT_THROW(Grid::unit_square(4, FaceMask{}), std::invalid_argument);
  EXPECT_THROW(Grid::unit_square(1, FaceMask::from_faces({Face::Left})), std::invalid_argument);
  EXPECT_THROW(Grid(2, {4, 4}, {0.0, 0.1}, FaceMask::from_faces({Face::Left})), std::invalid_argument);
  EXPECT_THROW(Grid(3, {4, 4}, {0.1, 0.1}, FaceMask::from_faces({Face::Left})), std::invalid_argument);
}

TEST(Grid, NodeWeightsIntegrateTheDomain) {
  const Grid g(2, {5, 3}, {0.2, 0.5}, FaceMask::from_faces({Face::Bottom}));
  const auto& w = g.node_weights();
  EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.5, 1e-15);
  EXPECT_EQ(g.neumann_segments().size(), 5u + 3u + 3u);
  const Grid line = Grid::unit_interval(8, FaceMask::from_faces({Face::Left}));
  EXPECT_NEAR(std::accumulate(line.node_weights().begin(), line.node_weights().end(), 0.0), 1.0, 1e-15);
  EXPECT_EQ(line.free_nodes().size(), 8u);
}

TEST(SymGradient, KillsTranslations) {
  const Grid g = square(6);
  const auto eps = sym_gradient(g, sample(g, [](double, double) { return std::array<double, 2>{0.3, -1.2}; }));
  for (const auto& e : eps) EXPECT_LT(e.norm(), 1e-14);
}

TEST(SymGradient, ExactOnLinearFields) {
  const Grid g = square(6);
  for (const auto& e : sym_gradient(g, sample(g, [](double x, double) { return std::array<double, 2>{x, 0.0}; }))) {
    EXPECT_NEAR(e(0, 0), 1.0, 1e-13);
    EXPECT_NEAR(e(0, 1), 0.0, 1e-13);
    EXPECT_NEAR(e(1, 1), 0.0, 1e-13);
  }
  for (const auto& e :
       sym_gradient(g, sample(g, [](double x, double y) { return std::array<double, 2>{0.5 * y, 0.5 * x}; }))) {
    EXPECT_NEAR(e(0, 0), 0.0, 1e-13);
    EXPECT_NEAR(e(0, 1), 0.5, 1e-13);
    EXPECT_NEAR(e(1, 1), 0.0, 1e-13);
  }
}

TEST(SymGradient, ReproducesConstantStrainOfAffineFields) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  const Grid g(2, {7, 5}, {0.3, 0.2}, FaceMask::from_faces({Face::Left}));
  for (int trial = 0; trial < 20; ++trial) {
    const double a = n(rng), b = n(rng), c = n(rng), d = n(rng), e0 = n(rng), e1 = n(rng);
    const auto eps = sym_gradient(
        g, sample(g, [&](double x, double y) { return std::array<double, 2>{e0 + a * x + b * y, e1 + c * x + d * y}; }));
    for (const auto& e : eps) {
      EXPECT_NEAR(e(0, 0), a, 1e-12);
      EXPECT_NEAR(e(1, 1), d, 1e-12);
      EXPECT_NEAR(e(0, 1), 0.5 * (b + c), 1e-12);
    }
  }
  const Grid line = Grid::unit_interval(5, FaceMask::from_faces({Face::Left}));
  for (const auto& e : sym_gradient(line, sample(line, [](double x, double) { return std::array<double, 2>{3 * x, 0}; })))
    EXPECT_NEAR(e(0, 0), 3.0, 1e-13);
}

TEST(SymGradient, RejectsShapeMismatch) {
  const Grid g = square(4);
  EXPECT_THROW(sym_gradient(g, VectorField::Zero(3)), std::invalid_argument);
  EXPECT_THROW(internal_force(g, TensorField(3, SymTensor(2))), std::invalid_argument);
}

TEST(InternalForce, ZeroStressGivesZero) {
  const Grid g = square(4);
  EXPECT_EQ(internal_force(g, TensorField(g.cell_count(), SymTensor(2))).norm(), 0.0);
}

TEST(InternalForce, IsTheAdjointOfSymGradient) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const Grid& g : {square(5), Grid::unit_interval(9, FaceMask::from_faces({Face::Right}))}) {
    for (int trial = 0; trial < 100; ++trial) {
      TensorField s(g.cell_count(), SymTensor(g.dim()));
      for (auto& t : s)
        for (int k = 0; k < t.packed_size(); ++k) t.packed(k) = u(rng);
      const VectorField w = random_field(g, rng, true);
      const double lhs = internal_force(g, s).dot(w);
      const auto eps = sym_gradient(g, w);
      std::vector<double> terms;
      for (int c = 0; c < g.cell_count(); ++c) terms.push_back(g.cell_volume() * ddot(s[c], eps[c]));
      const double rhs = oracle::random_order_sum(terms, 100 + trial);
      EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST(InternalForce, ConstantStressBalancesAtInteriorNodes) {
  const Grid g = square(8);
  SymTensor s(2);
  s.set(0, 0, 1.3);
  s.set(0, 1, -0.4);
  s.set(1, 1, 2.1);
  const VectorField r = internal_force(g, TensorField(g.cell_count(), s));
  double sx = 0.0, sy = 0.0;
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) {
      const int n = g.node(i, j);
      EXPECT_NEAR(r[2 * n], 0.0, 1e-14);
      EXPECT_NEAR(r[2 * n + 1], 0.0, 1e-14);
      sx += r[2 * n];
      sy += r[2 * n + 1];
    }
  EXPECT_NEAR(sx, 0.0, 1e-13);
  EXPECT_NEAR(sy, 0.0, 1e-13);
}

TEST(LumpedMass, RowSumsIntegrateUnitDensity) {
  const Grid g = square(6);
  EXPECT_NEAR(lumped_mass(g).sum(), 2.0, 1e-14);
}

TEST(GradientEnergy, ExactOnLinearAndZeroOnConstants) {
  const Grid g(2, {6, 4}, {0.5, 0.25}, FaceMask::from_faces({Face::Left}));
  const SparseMatrix l = gradient_energy_matrix(g);
  ScalarField one = ScalarField::Ones(g.node_count()), x(g.node_count()), y(g.node_count());
  for (int n = 0; n < g.node_count(); ++n) {
    x[n] = g.node_coords(n)[0];
    y[n] = g.node_coords(n)[1];
  }
  EXPECT_NEAR(one.dot(l * one), 0.0, 1e-14);
  EXPECT_NEAR(x.dot(l * x), 3.0, 1e-12);  // |grad x|^2 * area
  EXPECT_NEAR((2 * x + y).dot(l * (2 * x + y)), 15.0, 1e-12);
}

TEST(HkInner, ConstantsGiveAreaTimesSquare) {
  const Grid g = square(8);
  const ScalarField one = ScalarField::Ones(g.node_count());
  EXPECT_NEAR(hk_inner(g, 0, one, one), 1.0, 1e-12);
  for (int k = 0; k <= 3; ++k) EXPECT_NEAR(hk_inner(g, k, 2.5 * one, 2.5 * one), 6.25, 1e-11) << k;
}

TEST(HkInner, LinearFunctionConvergesUnderRefinement) {
  // k = 1, v = x on [0, 1]: int x^2 + 1 dx = 4/3.
  std::vector<double> values;
  for (int n : {16, 32, 64}) {
    const Grid g = Grid::unit_interval(n, FaceMask::from_faces({Face::Left}));
    ScalarField x(g.node_count());
    for (int i = 0; i < g.node_count(); ++i) x[i] = g.node_coords(i)[0];
    values.push_back(hk_inner(g, 1, x, x));
  }
  const double e1 = std::abs(values[0] - 4.0 / 3.0), e2 = std::abs(values[1] - 4.0 / 3.0),
               e3 = std::abs(values[2] - 4.0 / 3.0);
  EXPECT_GT(e1 / e2, 3.9);
  EXPECT_GT(e2 / e3, 3.9);
  EXPECT_NEAR((4.0 * values[2] - values[1]) / 3.0, 4.0 / 3.0, 1e-10);
}

TEST(HkInner, SymmetricPositiveDefiniteAndMonotoneInK) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Grid g = square(6);
  for (int trial = 0; trial < 20; ++trial) {
    ScalarField v(g.node_count()), w(g.node_count());
    for (auto& a : v) a = u(rng);
    for (auto& a : w) a = u(rng);
    double prev = 0.0;
    for (int k = 0; k <= 3; ++k) {
      const double vv = hk_inner(g, k, v, v);
      EXPECT_GT(vv, 0.0);
      EXPECT_GE(vv, prev);
      prev = vv;
      EXPECT_NEAR(hk_inner(g, k, v, w), hk_inner(g, k, w, v), 1e-9 * vv);
    }
  }
  const ScalarField zero = ScalarField::Zero(g.node_count());
  EXPECT_EQ(hk_inner(g, 3, zero, zero), 0.0);
}

TEST(HkInner, GramMatchesBilinearForm) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const Grid& g : {square(6), Grid::unit_interval(10, FaceMask::from_faces({Face::Left}))}) {
    for (int k = 0; k <= 3; ++k) {
      const SparseMatrix gram = hk_gram(g, k);
      ScalarField v(g.node_count()), w(g.node_count());
      for (auto& a : v) a = u(rng);
      for (auto& a : w) a = u(rng);
      const double ref = hk_inner(g, k, v, w);
      EXPECT_NEAR(v.dot(gram * w), ref, 1e-10 * (1.0 + std::abs(ref)));
    }
  }
}

TEST(HkInner, DefaultOrderAndLimits) {
  EXPECT_EQ(default_hk_order(1), 2);
  EXPECT_EQ(default_hk_order(2), 3);
  const Grid g = square(4);
  const ScalarField one = ScalarField::Ones(g.node_count());
  EXPECT_THROW(hk_inner(g, 4, one, one), std::invalid_argument);
}

TEST(BoundaryLoad, ZeroTractionGivesZero) {
  const Grid g = square(4);
  EXPECT_EQ(boundary_load(g, [](double, const FacePoint&) { return std::array<double, 2>{0, 0}; }, 0.0).norm(), 0.0);
}

TEST(BoundaryLoad, ConstantTractionSplitsOverFaceNodes) {
  const Grid g(2, {4, 5}, {0.25, 0.4}, FaceMask::from_faces({Face::Left, Face::Top, Face::Bottom}));
  const VectorField l = boundary_load(g, [](double, const FacePoint& p) {
    return p.face == Face::Right ? std::array<double, 2>{3.0, -1.0} : std::array<double, 2>{0.0, 0.0};
  }, 0.0);
  // Face length 2; the two corner nodes are clamped by top and bottom.
  double fx = 0.0, fy = 0.0;
  for (int j = 1; j < g.ny(); ++j) {
    fx += l[2 * g.node(g.nx(), j)];
    fy += l[2 * g.node(g.nx(), j) + 1];
  }
  EXPECT_NEAR(fx, 3.0 * 2.0 - 3.0 * 0.4, 1e-13);
  EXPECT_NEAR(fy, -1.0 * 2.0 + 1.0 * 0.4, 1e-13);
  const Grid open = square(4);
  const VectorField lo = boundary_load(open, [](double, const FacePoint& p) {
    return p.face == Face::Right ? std::array<double, 2>{3.0, 0.0} : std::array<double, 2>{0.0, 0.0};
  }, 0.0);
  EXPECT_NEAR(lo.sum(), 3.0, 1e-14);
}

TEST(BoundaryLoad, LinearTractionMatchesTrapezoid) {
  const Grid g(2, {3, 7}, {0.5, 0.3}, FaceMask::from_faces({Face::Left}));
  auto gx = [](double y, double t) { return 2.0 + 5.0 * y * t; };
  const double t = 0.7;
  const VectorField l = boundary_load(g, [&](double time, const FacePoint& p) {
    return p.face == Face::Right ? std::array<double, 2>{gx(p.x[1], time), 0.0} : std::array<double, 2>{0.0, 0.0};
  }, t);
  std::vector<double> pieces;
  for (int j = 0; j < g.ny(); ++j) pieces.push_back(0.5 * g.hy() * (gx(j * g.hy(), t) + gx((j + 1) * g.hy(), t)));
  double total = 0.0;
  for (int n = 0; n < g.node_count(); ++n) total += l[2 * n];
  EXPECT_NEAR(total, oracle::random_order_sum(pieces, 4), 1e-12);
}

TEST(BodyLoad, IntegratesConstantForce) {
  const Grid g = Grid::unit_square(5, FaceMask::from_faces({Face::Left}));
  const VectorField l = body_load(g, [](double, const std::array<double, 2>&) { return std::array<double, 2>{1.0, 2.0}; }, 0.0);
  // Clamped left column carries weight h/2.
  EXPECT_NEAR(l.sum(), 3.0 * (1.0 - 0.5 * 0.2), 1e-13);
}

TEST(Korn, DiscreteConstantIsFinite) {
  // Smallest eigenvalue of sum_cells B'B on the free dofs by inverse power iteration.
  const Grid g = square(16);
  const Eigen::MatrixXd b = cell_strain_operator(g);
  std::vector<int> map(g.dof_count(), -1);
  int nf = 0;
  for (int n = 0; n < g.node_count(); ++n)
    if (!g.is_dirichlet_node(n)) {
      map[2 * n] = nf++;
      map[2 * n + 1] = nf++;
    }
  std::vector<Eigen::Triplet<double>> trip;
  const Eigen::MatrixXd bb = b.transpose() * b;
  for (int c = 0; c < g.cell_count(); ++c) {
    const auto dofs = cell_dofs(g, c);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        if (map[dofs[i]] >= 0 && map[dofs[j]] >= 0) trip.emplace_back(map[dofs[i]], map[dofs[j]], bb(i, j));
  }
  SparseMatrix k(nf, nf);
  k.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(k);
  ASSERT_EQ(ldlt.info(), Eigen::Success);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(nf);
  double mu = 0.0;
  for (int it = 0; it < 500; ++it) {
    x = ldlt.solve(x);
    mu = x.norm();
    x /= mu;
  }
  const double lambda_min = 1.0 / mu;
  ASSERT_GT(lambda_min, 0.0);
  const double c_h = 1.0 / std::sqrt(lambda_min);
  EXPECT_TRUE(std::isfinite(c_h));
  EXPECT_LT(c_h, 1e4);

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const VectorField u = random_field(g, rng, true);
    double e2 = 0.0;
    for (const auto& e : sym_gradient(g, u)) e2 += e.norm_squared();
    EXPECT_LE(u.norm(), c_h * std::sqrt(e2) * (1.0 + 1e-8));
  }
}
