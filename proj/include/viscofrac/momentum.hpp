#pragma once

// One implicit step of the damped momentum balance
//   M (u - 2 u1 + u2) / dt^2 + B' [vol b(v1) F^{-1}(eps((u - u1)/dt + alpha u))] = l
// with u1 = u_{m-1}, u2 = u_{m-2}, v1 = v_{m-1}, and homogeneous Dirichlet data.

#include <vector>

#include "viscofrac/constitutive.hpp"
#include "viscofrac/error.hpp"
#include "viscofrac/field_ops.hpp"

namespace viscofrac {

struct MomentumStepInput {
  const Grid* grid = nullptr;
  VectorField u_prev;   // u_{m-1}
  VectorField u_prev2;  // u_{m-2}
  ScalarField v_prev;   // v_{m-1}
  double dt = 0.0;
  double alpha = 1.0;
  ConstitutiveLaw law;
  DegradationSpec degradation;
  VectorField load;  // lumped body force plus Neumann load at t_m

  void validate() const;
};

enum class LineSearch { None, Backtracking };

struct NewtonConfig {
  int max_iters = 50;
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  LineSearch line_search = LineSearch::Backtracking;
};

struct MomentumResult {
  VectorField u;
  TensorField stress;  // F^{-1}(eps(du + alpha u)) per cell
  int iterations = 0;
  double residual_norm = 0.0;
  double max_strain_norm = 0.0;  // max cell |eps(du + alpha u)|
  std::vector<double> residual_history;
};

class NewtonDivergence : public Error {
 public:
  NewtonDivergence(const std::string& what, VectorField best, std::vector<double> history)
      : Error(what), best_iterate(std::move(best)), residual_history(std::move(history)) {}

  VectorField best_iterate;
  std::vector<double> residual_history;
};

/// Cell values of b(v), each the mean of b at the cell's nodes.
Eigen::VectorXd cell_degradation(const Grid& grid, const DegradationSpec& spec, const ScalarField& v);

VectorField momentum_residual(const MomentumStepInput& in, const VectorField& u);

/// Consistent tangent of momentum_residual at u, on all dofs (Dirichlet rows
/// and columns replaced by the identity).
SparseMatrix momentum_tangent(const MomentumStepInput& in, const VectorField& u);

/// Newton with backtracking on ||R||_2. Starts from the extrapolation
/// 2 u_{m-1} - u_{m-2}, or from `initial_guess` when given.
MomentumResult momentum_step(const MomentumStepInput& in, const NewtonConfig& cfg,
                             const VectorField* initial_guess = nullptr);

}  // namespace viscofrac
