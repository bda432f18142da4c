#pragma once

// Energy functionals and the discrete energy-dissipation ledger
//   F(t_m) + sum_j <l_j - l_{j-1}, u_{j-1}> + D_m [+ R_m] <= F(0),
// where F = K(du) + E(u, v) + H(v) - <l, u>, D_m the accumulated viscous
// dissipation and R_m the accumulated rate penalty sum_j dt |dv_j|^2_k.

#include <iosfwd>
#include <vector>

#include "viscofrac/constitutive.hpp"
#include "viscofrac/field_ops.hpp"

namespace viscofrac {

struct EnergyTerms {
  double kinetic = 0.0;
  double elastic = 0.0;
  double surface = 0.0;
  double work = 0.0;  // <l_m, u_m>

  double total() const { return kinetic + elastic + surface - work; }
};

struct EnergyModel {
  ConstitutiveLaw law;
  DegradationSpec degradation;
  double alpha = 1.0;
  double eps_pf = 0.1;
};

/// Throws Error("safety strain violated") where phi*(eps(alpha u)) is infinite.
EnergyTerms energies(const Grid& grid, const EnergyModel& model, const VectorField& u,
                     const VectorField& du, const ScalarField& v, const VectorField& load);

/// Cell values phi*(eps(alpha u)).
Eigen::VectorXd elastic_density(const Grid& grid, const ConstitutiveLaw& law, double alpha,
                                const VectorField& u);

double elastic_energy(const Grid& grid, const EnergyModel& model, const VectorField& u, const ScalarField& v);
double surface_energy(const Grid& grid, double eps_pf, const ScalarField& v);
double kinetic_energy(const Grid& grid, const VectorField& du);

/// dt * sum_cells vol * b_prev [F^{-1}(eps(du) + alpha eps(u)) - F^{-1}(alpha eps(u))] : eps(du).
double dissipation_increment(const Grid& grid, const ConstitutiveLaw& law, double alpha,
                             const Eigen::VectorXd& b_cells_prev, const TensorField& strain_rate,
                             const TensorField& strain, double dt);

/// dt * |dv|_k^2 with dv = (v_m - v_prev) / dt, given the Gram matrix of hk_inner.
double rate_penalty_increment(const SparseMatrix& gram, const ScalarField& v_m, const ScalarField& v_prev,
                              double dt);

struct EnergyReport {
  int step = 0;
  double time = 0.0;
  double kinetic = 0.0;
  double elastic = 0.0;
  double surface = 0.0;
  double work = 0.0;
  double rate_penalty_sum = 0.0;
  double external_work_terms = 0.0;     // sum_j <l_j - l_{j-1}, u_{j-1}>
  double external_statement_form = 0.0;  // sum_j <l_j - l_{j-1}, u_j>
  double viscous_dissipation_sum = 0.0;
  double total_free_energy = 0.0;
  double inequality_residual = 0.0;
  double budget = 0.0;  // allowed residual including solver inexactness
  int newton_iters = 0;
  double max_strain_norm = 0.0;
};

struct StepIncrements {
  double dissipation = 0.0;
  double rate_penalty = 0.0;
  double external_proof = 0.0;
  double external_statement = 0.0;
  double newton_residual = 0.0;      // final ||R(u_m)||
  double displacement_change = 0.0;  // ||u_m - u_{m-1}||
  double phase_pairing = 0.0;        // |grad J(v_m) . (v_m - v_prev)|
  int newton_iters = 0;
  double max_strain_norm = 0.0;
};

class EnergyLedger {
 public:
  void start(const EnergyTerms& initial, double time = 0.0);
  const EnergyReport& record(int step, double time, const EnergyTerms& terms, const StepIncrements& inc);

  double initial_energy() const { return initial_total_; }
  const std::vector<EnergyReport>& history() const { return history_; }
  const EnergyReport& last() const { return history_.back(); }
  /// True if every recorded residual is within its budget.
  bool inequality_holds() const;

  void write_csv(std::ostream& os) const;

 private:
  double initial_total_ = 0.0;
  double slack_ = 0.0;  // accumulated solver inexactness
  std::vector<EnergyReport> history_;
};

/// Residual of the last entry, recomputed from the accumulated columns.
double inequality_residual(const std::vector<EnergyReport>& history);

}  // namespace viscofrac
