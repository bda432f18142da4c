#include "viscofrac/field_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace viscofrac {

namespace {

void check_vector(const Grid& grid, const VectorField& u) {
  if (u.size() != grid.dof_count()) throw std::invalid_argument("vector field does not match the grid");
}

void check_scalar(const Grid& grid, const ScalarField& v) {
  if (v.size() != grid.node_count()) throw std::invalid_argument("scalar field does not match the grid");
}

}  // namespace

std::vector<int> cell_dofs(const Grid& grid, int cell) {
  const int d = grid.dim();
  const auto nodes = grid.cell_nodes(cell);
  std::vector<int> dofs;
  dofs.reserve(grid.nodes_per_cell() * d);
  for (int a = 0; a < grid.nodes_per_cell(); ++a)
    for (int c = 0; c < d; ++c) dofs.push_back(nodes[a] * d + c);
  return dofs;
}

Eigen::MatrixXd cell_strain_operator(const Grid& grid) {
  const auto& g = grid.center_gradients();
  if (grid.dim() == 1) {
    Eigen::MatrixXd b(1, 2);
    b << g[0][0], g[1][0];
    return b;
  }
  // Mandel rows: xx, sqrt(2) xy, yy.
  const double r = std::sqrt(2.0) / 2.0;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3, 8);
  for (int a = 0; a < 4; ++a) {
    b(0, 2 * a) = g[a][0];
    b(1, 2 * a) = r * g[a][1];
    b(1, 2 * a + 1) = r * g[a][0];
    b(2, 2 * a + 1) = g[a][1];
  }
  return b;
}

TensorField sym_gradient(const Grid& grid, const VectorField& u) {
  check_vector(grid, u);
  const int d = grid.dim();
  const auto& g = grid.center_gradients();
  TensorField eps(grid.cell_count(), SymTensor(d));
  for (int c = 0; c < grid.cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();  // grad(i, j) = d u_i / d x_j
    for (int a = 0; a < grid.nodes_per_cell(); ++a)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) grad(i, j) += u[nodes[a] * d + i] * g[a][j];
    SymTensor& e = eps[c];
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) e.set(i, j, 0.5 * (grad(i, j) + grad(j, i)));
  }
  return eps;
}

VectorField internal_force(const Grid& grid, const TensorField& weighted_stress) {
  if (static_cast<int>(weighted_stress.size()) != grid.cell_count())
    throw std::invalid_argument("stress field does not match the grid");
  const int d = grid.dim();
  const double vol = grid.cell_volume();
  const auto& g = grid.center_gradients();
  VectorField r = VectorField::Zero(grid.dof_count());
  for (int c = 0; c < grid.cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    const SymTensor& s = weighted_stress[c];
    for (int a = 0; a < grid.nodes_per_cell(); ++a)
      for (int i = 0; i < d; ++i) {
        double acc = 0.0;
        for (int j = 0; j < d; ++j) acc += s(i, j) * g[a][j];
        r[nodes[a] * d + i] += vol * acc;
      }
  }
  apply_dirichlet(grid, r);
  return r;
}

Eigen::VectorXd lumped_mass(const Grid& grid) {
  const int d = grid.dim();
  Eigen::VectorXd m(grid.dof_count());
  const auto& w = grid.node_weights();
  for (int n = 0; n < grid.node_count(); ++n)
    for (int c = 0; c < d; ++c) m[n * d + c] = w[n];
  return m;
}

void apply_dirichlet(const Grid& grid, VectorField& u) {
  const int d = grid.dim();
  for (int n = 0; n < grid.node_count(); ++n)
    if (grid.is_dirichlet_node(n))
      for (int c = 0; c < d; ++c) u[n * d + c] = 0.0;
}

void apply_phase_dirichlet(const Grid& grid, ScalarField& v) {
  for (int n = 0; n < grid.node_count(); ++n)
    if (grid.is_dirichlet_node(n)) v[n] = 1.0;
}

Eigen::VectorXd cell_average(const Grid& grid, const ScalarField& v) {
  check_scalar(grid, v);
  const int npc = grid.nodes_per_cell();
  Eigen::VectorXd out(grid.cell_count());
  for (int c = 0; c < grid.cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    double s = 0.0;
    for (int a = 0; a < npc; ++a) s += v[nodes[a]];
    out[c] = s / npc;
  }
  return out;
}

SparseMatrix gradient_energy_matrix(const Grid& grid) {
  std::vector<Eigen::Triplet<double>> trip;
  const double vol = grid.cell_volume();
  auto add_edge = [&](int p, int q, double weight) {
    trip.emplace_back(p, p, weight);
    trip.emplace_back(q, q, weight);
    trip.emplace_back(p, q, -weight);
    trip.emplace_back(q, p, -weight);
  };
  for (int c = 0; c < grid.cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    if (grid.dim() == 1) {
      add_edge(nodes[0], nodes[1], vol / (grid.hx() * grid.hx()));
      continue;
    }
    const double wx = 0.5 * vol / (grid.hx() * grid.hx());
    const double wy = 0.5 * vol / (grid.hy() * grid.hy());
    add_edge(nodes[0], nodes[1], wx);
    add_edge(nodes[2], nodes[3], wx);
    add_edge(nodes[0], nodes[2], wy);
    add_edge(nodes[1], nodes[3], wy);
  }
  SparseMatrix l(grid.node_count(), grid.node_count());
  l.setFromTriplets(trip.begin(), trip.end());
  return l;
}

int default_hk_order(int dim) { return dim / 2 + 2; }

namespace {

// One-dimensional forward difference of order m along an axis with `cells`
// cells: node i uses the stencil starting at min(i, cells - m).
struct Stencil {
  int start;
  std::array<double, 4> coef;
};

Stencil difference_stencil(int i, int m, int cells, double h) {
  static const int binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  Stencil s{std::min(i, cells - m), {}};
  const double scale = 1.0 / std::pow(h, m);
  for (int r = 0; r <= m; ++r) s.coef[r] = (((m - r) % 2) ? -1.0 : 1.0) * binom[m][r] * scale;
  return s;
}

std::vector<std::array<int, 2>> multi_indices(int dim, int k) {
  std::vector<std::array<int, 2>> out;
  for (int mx = 0; mx <= k; ++mx) {
    if (dim == 1) {
      out.push_back({mx, 0});
      continue;
    }
    for (int my = 0; mx + my <= k; ++my) out.push_back({mx, my});
  }
  return out;
}

void check_order(const Grid& grid, int k) {
  if (k < 0 || k > 3) throw std::invalid_argument("hk_inner supports 0 <= k <= 3");
  if (k > grid.nx() || (grid.dim() == 2 && k > grid.ny()))
    throw std::invalid_argument("hk_inner order exceeds the cells per axis");
}

// Rows of D^alpha as (node, coefficient) lists.
std::vector<std::vector<std::pair<int, double>>> difference_rows(const Grid& grid,
                                                                 std::array<int, 2> alpha) {
  std::vector<std::vector<std::pair<int, double>>> rows(grid.node_count());
  const int ny_nodes = grid.dim() == 2 ? grid.ny() + 1 : 1;
  for (int j = 0; j < ny_nodes; ++j)
    for (int i = 0; i <= grid.nx(); ++i) {
      auto& row = rows[grid.node(i, j)];
      const Stencil sx = difference_stencil(i, alpha[0], grid.nx(), grid.hx());
      if (grid.dim() == 1) {
        for (int r = 0; r <= alpha[0]; ++r) row.emplace_back(grid.node(sx.start + r), sx.coef[r]);
        continue;
      }
      const Stencil sy = difference_stencil(j, alpha[1], grid.ny(), grid.hy());
      for (int ry = 0; ry <= alpha[1]; ++ry)
        for (int rx = 0; rx <= alpha[0]; ++rx)
          row.emplace_back(grid.node(sx.start + rx, sy.start + ry), sx.coef[rx] * sy.coef[ry]);
    }
  return rows;
}

}  // namespace

double hk_inner(const Grid& grid, int k, const ScalarField& v, const ScalarField& w) {
  check_order(grid, k);
  check_scalar(grid, v);
  check_scalar(grid, w);
  const auto& weight = grid.node_weights();
  double total = 0.0;
  for (const auto& alpha : multi_indices(grid.dim(), k)) {
    const auto rows = difference_rows(grid, alpha);
    for (int n = 0; n < grid.node_count(); ++n) {
      double dv = 0.0, dw = 0.0;
      for (const auto& [m, c] : rows[n]) {
        dv += c * v[m];
        dw += c * w[m];
      }
      total += weight[n] * dv * dw;
    }
  }
  return total;
}

SparseMatrix hk_gram(const Grid& grid, int k) {
  check_order(grid, k);
  const int nn = grid.node_count();
  const auto& weight = grid.node_weights();
  SparseMatrix gram(nn, nn);
  for (const auto& alpha : multi_indices(grid.dim(), k)) {
    const auto rows = difference_rows(grid, alpha);
    std::vector<Eigen::Triplet<double>> trip;
    for (int n = 0; n < nn; ++n)
      for (const auto& [m, c] : rows[n]) trip.emplace_back(n, m, c);
    SparseMatrix d(nn, nn);
    d.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(weight.data(), nn);
    gram += SparseMatrix(d.transpose() * wv.asDiagonal() * d);
  }
  gram.makeCompressed();
  return gram;
}

VectorField boundary_load(const Grid& grid, const TractionFn& g, double t) {
  const int d = grid.dim();
  VectorField l = VectorField::Zero(grid.dof_count());
  for (const auto& seg : grid.neumann_segments()) {
    const int ends = d == 1 ? 1 : 2;
    const double share = d == 1 ? 1.0 : 0.5 * seg.measure;
    for (int e = 0; e < ends; ++e) {
      const int n = seg.nodes[e];
      const FacePoint pt{seg.face, n, seg.cell, grid.node_coords(n), grid.outward_normal(seg.face)};
      const auto val = g(t, pt);
      for (int c = 0; c < d; ++c) l[n * d + c] += share * val[c];
    }
  }
  apply_dirichlet(grid, l);
  return l;
}

VectorField body_load(const Grid& grid, const BodyForceFn& f, double t) {
  const int d = grid.dim();
  VectorField l = VectorField::Zero(grid.dof_count());
  const auto& w = grid.node_weights();
  for (int n = 0; n < grid.node_count(); ++n) {
    const auto val = f(t, grid.node_coords(n));
    for (int c = 0; c < d; ++c) l[n * d + c] = w[n] * val[c];
  }
  apply_dirichlet(grid, l);
  return l;
}

}  // namespace viscofrac
