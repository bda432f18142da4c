#include "viscofrac/energy.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "viscofrac/error.hpp"
#include "viscofrac/momentum.hpp"

namespace viscofrac {

Eigen::VectorXd elastic_density(const Grid& grid, const ConstitutiveLaw& law, double alpha,
                                const VectorField& u) {
  const TensorField eps = sym_gradient(grid, u);
  Eigen::VectorXd psi(grid.cell_count());
  for (int c = 0; c < grid.cell_count(); ++c) {
    psi[c] = conjugate_potential(law, alpha * eps[c]);
    if (!std::isfinite(psi[c])) throw Error("safety strain violated");
  }
  return psi;
}

double elastic_energy(const Grid& grid, const EnergyModel& model, const VectorField& u, const ScalarField& v) {
  const Eigen::VectorXd psi = elastic_density(grid, model.law, model.alpha, u);
  const Eigen::VectorXd b = cell_degradation(grid, model.degradation, v);
  double e = 0.0;
  for (int c = 0; c < grid.cell_count(); ++c) e += b[c] * psi[c];
  return e * grid.cell_volume() / model.alpha;
}

double surface_energy(const Grid& grid, double eps_pf, const ScalarField& v) {
  const auto& w = grid.node_weights();
  double l2 = 0.0;
  for (int n = 0; n < grid.node_count(); ++n) l2 += w[n] * (1.0 - v[n]) * (1.0 - v[n]);
  return l2 / (4.0 * eps_pf) + eps_pf * v.dot(gradient_energy_matrix(grid) * v);
}

double kinetic_energy(const Grid& grid, const VectorField& du) {
  return 0.5 * du.dot(lumped_mass(grid).cwiseProduct(du));
}

EnergyTerms energies(const Grid& grid, const EnergyModel& model, const VectorField& u,
                     const VectorField& du, const ScalarField& v, const VectorField& load) {
  EnergyTerms t;
  t.kinetic = kinetic_energy(grid, du);
  t.elastic = elastic_energy(grid, model, u, v);
  t.surface = surface_energy(grid, model.eps_pf, v);
  t.work = load.dot(u);
  return t;
}

double dissipation_increment(const Grid& grid, const ConstitutiveLaw& law, double alpha,
                             const Eigen::VectorXd& b_cells_prev, const TensorField& strain_rate,
                             const TensorField& strain, double dt) {
  if (static_cast<int>(strain_rate.size()) != grid.cell_count() ||
      static_cast<int>(strain.size()) != grid.cell_count() || b_cells_prev.size() != grid.cell_count())
    throw std::invalid_argument("dissipation fields do not match the grid");
  double sum = 0.0;
  for (int c = 0; c < grid.cell_count(); ++c) {
    const SymTensor a = alpha * strain[c];
    const SymTensor diff = inverse_response(law, strain_rate[c] + a) - inverse_response(law, a);
    sum += b_cells_prev[c] * ddot(diff, strain_rate[c]);
  }
  return dt * grid.cell_volume() * sum;
}

double rate_penalty_increment(const SparseMatrix& gram, const ScalarField& v_m, const ScalarField& v_prev,
                              double dt) {
  const Eigen::VectorXd dv = v_m - v_prev;
  return dv.dot(gram * dv) / dt;
}

void EnergyLedger::start(const EnergyTerms& initial, double time) {
  history_.clear();
  slack_ = 0.0;
  initial_total_ = initial.total();
  EnergyReport r;
  r.time = time;
  r.kinetic = initial.kinetic;
  r.elastic = initial.elastic;
  r.surface = initial.surface;
  r.work = initial.work;
  r.total_free_energy = initial_total_;
  r.budget = 1e-8 * (1.0 + std::abs(initial_total_));
  history_.push_back(r);
}

const EnergyReport& EnergyLedger::record(int step, double time, const EnergyTerms& terms,
                                         const StepIncrements& inc) {
  if (history_.empty()) throw std::logic_error("energy ledger not started");
  const EnergyReport& prev = history_.back();
  EnergyReport r;
  r.step = step;
  r.time = time;
  r.kinetic = terms.kinetic;
  r.elastic = terms.elastic;
  r.surface = terms.surface;
  r.work = terms.work;
  r.rate_penalty_sum = prev.rate_penalty_sum + inc.rate_penalty;
  r.external_work_terms = prev.external_work_terms + inc.external_proof;
  r.external_statement_form = prev.external_statement_form + inc.external_statement;
  r.viscous_dissipation_sum = prev.viscous_dissipation_sum + inc.dissipation;
  r.total_free_energy = terms.total();
  r.inequality_residual = r.total_free_energy + r.external_work_terms + r.viscous_dissipation_sum +
                          r.rate_penalty_sum - initial_total_;
  slack_ += inc.newton_residual * inc.displacement_change + inc.phase_pairing;
  r.budget = 1e-8 * (1.0 + std::abs(initial_total_)) + slack_;
  r.newton_iters = inc.newton_iters;
  r.max_strain_norm = inc.max_strain_norm;
  history_.push_back(r);
  return history_.back();
}

bool EnergyLedger::inequality_holds() const {
  for (const auto& r : history_)
    if (!(r.inequality_residual <= r.budget)) return false;
  return true;
}

void EnergyLedger::write_csv(std::ostream& os) const {
  os << "step,time,kinetic,elastic,surface,rate_penalty,external,dissipation,total,inequality_residual,"
        "newton_iters,max_strain_norm\n";
  os << std::setprecision(17);
  for (const auto& r : history_) {
    os << r.step << ',' << r.time << ',' << r.kinetic << ',' << r.elastic << ',' << r.surface << ','
       << r.rate_penalty_sum << ',' << r.external_work_terms << ',' << r.viscous_dissipation_sum << ','
       << r.total_free_energy << ',' << r.inequality_residual << ',' << r.newton_iters << ','
       << r.max_strain_norm << '\n';
  }
}

double inequality_residual(const std::vector<EnergyReport>& history) {
  if (history.size() < 2) throw std::invalid_argument("inequality residual needs a completed step");
  const EnergyReport& r = history.back();
  return r.total_free_energy + r.external_work_terms + r.viscous_dissipation_sum + r.rate_penalty_sum -
         history.front().total_free_energy;
}

}  // namespace viscofrac
