#pragma once

// Phase-field step: minimize over nodal v
//   J(v) = E(u_m, v) + H(v) [+ (1/2dt) G_k(v - v_prev, v - v_prev)]
// subject to v <= v_prev and v = 1 on the Dirichlet nodes, where
//   E(u, v) = sum_cells vol * (b_c(v) / alpha) * phi*(eps(alpha u))_c,
//   b_c(v)  = mean of b(v_i) over the cell's nodes,
//   H(v)    = (1 / 4 eps) sum_i w_i (1 - v_i)^2 + eps * v' L v.

#include <memory>

#include "viscofrac/constitutive.hpp"
#include "viscofrac/error.hpp"
#include "viscofrac/field_ops.hpp"

namespace viscofrac {

struct PhaseStepInput {
  const Grid* grid = nullptr;
  Eigen::VectorXd elastic_density;  // phi*(eps(alpha u_m)) per cell
  ScalarField v_prev;
  double eps_pf = 0.1;
  double dt = 1.0;
  double alpha = 1.0;
  Section section = Section::Two;
  bool rate_term = false;  // adds the G_k penalty (section = 3 steps)
  int k = 0;               // G_k order; 0 selects default_hk_order
  double eta = 1e-3;
  /// Optional precomputed hk_gram(grid, k); built on demand otherwise.
  std::shared_ptr<const SparseMatrix> gram;

  void validate() const;
  int order() const;
};

struct KKTReport {
  double min_directional_derivative = 0.0;
  double rate_pairing_residual = 0.0;
  double max_constraint_violation = 0.0;
  int active_set_size = 0;
  double objective = 0.0;
  /// Attainable accuracy of the gradient and of the pairing in double
  /// precision; dominates when G_k / dt is large.
  double gradient_roundoff = 0.0;
  double pairing_roundoff = 0.0;

  /// 1e-8 * (1 + |J|) plus the gradient roundoff.
  double tolerance() const;
  double pairing_tolerance() const;
  bool satisfied() const;
};

class PhaseFieldError : public Error {
 public:
  PhaseFieldError(const std::string& what, KKTReport report) : Error(what), report(report) {}
  KKTReport report;
};

/// Nodal weights e_i with E(u, v) = sum_i e_i b(v_i).
Eigen::VectorXd nodal_elastic_weights(const Grid& grid, const Eigen::VectorXd& elastic_density,
                                      double alpha);

double phasefield_objective(const PhaseStepInput& in, const ScalarField& v);
/// dJ/dv_i on every node (Dirichlet entries included).
ScalarField phasefield_gradient(const PhaseStepInput& in, const ScalarField& v);

struct PhaseStepStats {
  int iterations = 0;
  bool used_fallback = false;
  bool unchanged = false;  // v_prev was already optimal
};

/// Primal-dual active set method; falls back to a primal active-set Newton
/// method if the active sets cycle (G_k is not an M-matrix). Throws PhaseFieldError if the KKT check fails.
ScalarField phasefield_step(const PhaseStepInput& in, PhaseStepStats* stats = nullptr);

KKTReport kkt_residual(const PhaseStepInput& in, const ScalarField& v_m);

}  // namespace viscofrac
