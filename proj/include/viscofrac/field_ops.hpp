#pragma once

// Discrete fields on a Grid and the operators acting on them.
//
// Layouts:
//   VectorField  nodal d-vectors, dof = node * d + component
//   ScalarField  one value per node
//   TensorField  one SymTensor per cell (one-point quadrature at the center)

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "viscofrac/grid.hpp"
#include "viscofrac/sym_tensor.hpp"

namespace viscofrac {

using VectorField = Eigen::VectorXd;
using ScalarField = Eigen::VectorXd;
using TensorField = std::vector<SymTensor>;
using SparseMatrix = Eigen::SparseMatrix<double>;

TensorField sym_gradient(const Grid& grid, const VectorField& u);

/// r with r.w = sum_cells vol * stress : sym_gradient(w); Dirichlet rows are zero.
VectorField internal_force(const Grid& grid, const TensorField& weighted_stress);

/// Mandel-row strain operator of a cell, acting on the local dofs
/// (local node a, component c) -> a * d + c. Identical for every cell.
Eigen::MatrixXd cell_strain_operator(const Grid& grid);
/// Global dof indices of a cell in the local order used by cell_strain_operator.
std::vector<int> cell_dofs(const Grid& grid, int cell);

/// Row-sum lumped mass per dof (unit density).
Eigen::VectorXd lumped_mass(const Grid& grid);

/// Zeroes the Dirichlet dofs of a vector field in place.
void apply_dirichlet(const Grid& grid, VectorField& u);
/// Sets the Dirichlet nodes of a phase field to 1 in place.
void apply_phase_dirichlet(const Grid& grid, ScalarField& v);

/// Cell averages of a nodal scalar.
Eigen::VectorXd cell_average(const Grid& grid, const ScalarField& v);

/// Scalar gradient-energy matrix L with v' L v = sum_cells vol * |grad_h v|^2,
/// where |grad_h v|^2 is the cell mean of the squared edge difference quotients.
SparseMatrix gradient_energy_matrix(const Grid& grid);

/// Smallest integer k with k > d/2 + 1.
int default_hk_order(int dim);

/// sum_{|alpha| <= k} sum_nodes w_node D^alpha v D^alpha w, with tensor-product
/// forward differences shifted inward at the far boundary and trapezoidal
/// node weights. Throws for k > 3 or k larger than the cells per axis.
double hk_inner(const Grid& grid, int k, const ScalarField& v, const ScalarField& w);

/// Gram matrix G with v' G w = hk_inner(grid, k, v, w).
SparseMatrix hk_gram(const Grid& grid, int k);

/// Traction g(t, point) on Gamma_N.
using TractionFn = std::function<std::array<double, 2>(double t, const FacePoint& point)>;
/// Body force f(t, x).
using BodyForceFn = std::function<std::array<double, 2>(double t, const std::array<double, 2>& x)>;

/// Face-lumped nodal load: each Neumann segment gives measure/2 * g(end) to
/// each of its end nodes (the full value in 1D). Dirichlet rows are zero.
VectorField boundary_load(const Grid& grid, const TractionFn& g, double t);
/// Nodal body load f(t, x_node) * node weight. Dirichlet rows are zero.
VectorField body_load(const Grid& grid, const BodyForceFn& f, double t);

}  // namespace viscofrac
