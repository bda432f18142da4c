#pragma once

// Staggered time loop: per step one momentum solve with the previous phase
// field, then one constrained phase-field minimization with the new
// displacement, then a ledger update.

#include <functional>
#include <string>
#include <vector>

#include "viscofrac/config.hpp"
#include "viscofrac/energy.hpp"
#include "viscofrac/phasefield.hpp"

namespace viscofrac {

struct Finding {
  std::string condition;  // e.g. "safety strain"
  std::string message;
  bool error = true;
};

struct ValidationResult {
  std::vector<Finding> findings;
  double safety_strain = 0.0;          // C* (section = 3)
  double compatibility_mismatch = 0.0;  // relative (section = 3)
  ScalarField v0_initial;              // minimized initial phase field (section = 2)

  bool ok() const;
};

/// Checks the admissibility of the data: section = 2 requires the p-growth
/// law and 0 <= v0 <= 1 and computes the minimized initial phase field;
/// section = 3 requires the regularized law, k > d/2 + 1, the safety strain
/// condition and compatibility of g(0) with the initial data.
ValidationResult validate(const SimConfig& config);

/// Non-increasing C^2 cut-off with psi = 1 on [0, 1/2] and psi = 0 on [1, inf).
double ramp_psi(double tau);

/// Blended traction F_n^{-1}(eps_c) n psi(n t) + g (1 - psi(n t)), where eps_c
/// is the cell value of eps(u1 + alpha u0) next to the boundary point.
std::array<double, 2> neumann_ramp(const std::array<double, 2>& g, const SymTensor& initial_strain,
                                   const ConstitutiveLaw& law_n, const std::array<double, 2>& normal,
                                   double t);

/// Nodal initial data sampled from the configuration (Dirichlet values imposed).
VectorField sample_vector(const Grid& grid, const std::array<Expression, 2>& e);
ScalarField sample_scalar(const Grid& grid, const Expression& e);

struct Snapshot {
  int step = 0;
  double time = 0.0;
  VectorField u;
  ScalarField v;
  Eigen::VectorXd stress_norm;  // per cell
};

struct StepRecord {
  int newton_iters = 0;
  double newton_residual = 0.0;
  KKTReport kkt;
  bool phase_fallback = false;
  double irreversibility_violation = 0.0;  // max(v_m - v_{m-1}), must be <= 0
};

struct SimOutput {
  EnergyLedger ledger;
  std::vector<Snapshot> snapshots;
  std::vector<StepRecord> steps;
  ValidationResult validation;
  VectorField u_final;
  ScalarField v_final;
  /// u_m and v_m for every m when RunOptions::keep_trajectory is set.
  std::vector<VectorField> u_history;
  std::vector<ScalarField> v_history;
  double max_strain_norm = 0.0;  // over cells and steps
  double max_stress_norm = 0.0;
  double wall_seconds = 0.0;
};

struct RunOptions {
  bool keep_trajectory = false;
  /// Called after every step with (step, report); may be empty.
  std::function<void(int, const EnergyReport&)> progress;
};

class StepFailure : public Error {
 public:
  StepFailure(int step, const std::string& what, VectorField u, ScalarField v, std::vector<double> history)
      : Error("step " + std::to_string(step) + ": " + what),
        step(step),
        last_u(std::move(u)),
        last_v(std::move(v)),
        residual_history(std::move(history)) {}

  int step;
  VectorField last_u;
  ScalarField last_v;
  std::vector<double> residual_history;
};

/// Throws std::invalid_argument listing the findings if validation fails.
SimOutput run(const SimConfig& config, const RunOptions& options = {});

/// Total nodal load l(t) = body force + Neumann traction (ramped in section = 3).
class LoadModel {
 public:
  LoadModel(const SimConfig& config, const Grid& grid, const VectorField& u0, const VectorField& u1);
  VectorField operator()(double t) const;

 private:
  const SimConfig& config_;
  const Grid& grid_;
  TensorField initial_strain_;  // eps(u1 + alpha u0) per cell
};

}  // namespace viscofrac
