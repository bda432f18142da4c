#include "viscofrac/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

namespace viscofrac {

void MomentumStepInput::validate() const {
  if (grid == nullptr) throw std::invalid_argument("momentum step without a grid");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  const int n = grid->dof_count();
  if (u_prev.size() != n || u_prev2.size() != n || load.size() != n)
    throw std::invalid_argument("momentum step fields do not match the grid");
  if (v_prev.size() != grid->node_count()) throw std::invalid_argument("phase field does not match the grid");
  law.validate();
}

Eigen::VectorXd cell_degradation(const Grid& grid, const DegradationSpec& spec, const ScalarField& v) {
  ScalarField b(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) b[i] = degradation(spec, v[i]).b;
  return cell_average(grid, b);
}

namespace {

struct Evaluation {
  VectorField residual;
  TensorField stress;
  double max_strain = 0.0;
};

// Everything about the step that does not depend on the unknown.
struct StepData {
  const MomentumStepInput& in;
  Eigen::VectorXd mass;
  Eigen::VectorXd b_cells;
  TensorField eps_prev;

  explicit StepData(const MomentumStepInput& input)
      : in(input),
        mass(lumped_mass(*input.grid)),
        b_cells(cell_degradation(*input.grid, input.degradation, input.v_prev)),
        eps_prev(sym_gradient(*input.grid, input.u_prev)) {}

  // eps(du + alpha u) = (1/dt + alpha) eps(u) - eps(u1) / dt
  TensorField driving_strain(const VectorField& u) const {
    TensorField eps = sym_gradient(*in.grid, u);
    const double c = 1.0 / in.dt + in.alpha;
    for (std::size_t k = 0; k < eps.size(); ++k) eps[k] = c * eps[k] - (1.0 / in.dt) * eps_prev[k];
    return eps;
  }

  Evaluation evaluate(const VectorField& u) const {
    Evaluation ev;
    const TensorField strain = driving_strain(u);
    ev.stress.resize(strain.size());
    TensorField weighted(strain.size());
    for (std::size_t k = 0; k < strain.size(); ++k) {
      ev.max_strain = std::max(ev.max_strain, strain[k].norm());
      ev.stress[k] = inverse_response(in.law, strain[k]);
      weighted[k] = b_cells[static_cast<Eigen::Index>(k)] * ev.stress[k];
    }
    const double inv_dt2 = 1.0 / (in.dt * in.dt);
    ev.residual = mass.cwiseProduct(u - 2.0 * in.u_prev + in.u_prev2) * inv_dt2 +
                  internal_force(*in.grid, weighted) - in.load;
    apply_dirichlet(*in.grid, ev.residual);
    return ev;
  }

  SparseMatrix tangent(const TensorField& stress) const {
    const Grid& grid = *in.grid;
    const Eigen::MatrixXd bm = cell_strain_operator(grid);
    const double vol = grid.cell_volume();
    const double c = 1.0 / in.dt + in.alpha;
    double scale = 1.0;
    for (const auto& t : stress) scale = std::max(scale, t.norm());
    const double mu = 1e-8 * scale;

    std::vector<Eigen::Triplet<double>> trip;
    const int d = grid.dim();
    for (int n = 0; n < grid.node_count(); ++n)
      for (int k = 0; k < d; ++k) {
        const int i = n * d + k;
        trip.emplace_back(i, i, grid.is_dirichlet_node(n) ? 1.0 : mass[i] / (in.dt * in.dt));
      }
    for (int cell = 0; cell < grid.cell_count(); ++cell) {
      const Eigen::MatrixXd tan = inverse_response_tangent(in.law, stress[cell], mu);
      const Eigen::MatrixXd ke = (vol * b_cells[cell] * c) * (bm.transpose() * tan * bm);
      const auto dofs = cell_dofs(grid, cell);
      for (std::size_t a = 0; a < dofs.size(); ++a) {
        if (grid.is_dirichlet_node(dofs[a] / d)) continue;
        for (std::size_t b = 0; b < dofs.size(); ++b) {
          if (grid.is_dirichlet_node(dofs[b] / d)) continue;
          trip.emplace_back(dofs[a], dofs[b], ke(a, b));
        }
      }
    }
    SparseMatrix k(grid.dof_count(), grid.dof_count());
    k.setFromTriplets(trip.begin(), trip.end());
    return k;
  }
};

Eigen::VectorXd solve_linear(const Grid& grid, const SparseMatrix& k, const Eigen::VectorXd& rhs) {
  if (grid.node_count() <= 400) {
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(k);
    if (ldlt.info() != Eigen::Success) throw Error("momentum tangent factorization failed");
    return ldlt.solve(rhs);
  }
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
  cg.setTolerance(1e-10);
  cg.setMaxIterations(std::max<int>(1000, 10 * static_cast<int>(k.rows())));
  cg.compute(k);
  Eigen::VectorXd x = cg.solve(rhs);
  if (cg.info() != Eigen::Success) throw Error("momentum CG solve did not converge");
  return x;
}

}  // namespace

VectorField momentum_residual(const MomentumStepInput& in, const VectorField& u) {
  in.validate();
  return StepData(in).evaluate(u).residual;
}

SparseMatrix momentum_tangent(const MomentumStepInput& in, const VectorField& u) {
  in.validate();
  StepData data(in);
  return data.tangent(data.evaluate(u).stress);
}

MomentumResult momentum_step(const MomentumStepInput& in, const NewtonConfig& cfg,
                             const VectorField* initial_guess) {
  in.validate();
  const Grid& grid = *in.grid;
  StepData data(in);

  // Candidate starting points; infeasible ones (strain bound) are skipped.
  std::vector<VectorField> guesses;
  if (initial_guess) guesses.push_back(*initial_guess);
  guesses.push_back(2.0 * in.u_prev - in.u_prev2);
  guesses.push_back(in.u_prev);
  VectorField u;
  Evaluation ev;
  bool started = false;
  for (auto& g : guesses) {
    apply_dirichlet(grid, g);
    try {
      ev = data.evaluate(g);
    } catch (const StrainBoundError&) {
      continue;
    }
    u = g;
    started = true;
    break;
  }
  if (!started) throw NewtonDivergence("no admissible Newton starting point", in.u_prev, {});

  const double tol = cfg.abs_tol + cfg.rel_tol * in.load.norm();
  MomentumResult res;
  double rnorm = ev.residual.norm();
  res.residual_history.push_back(rnorm);
  int it = 0;
  while (rnorm > tol) {
    if (it >= cfg.max_iters) {
      std::ostringstream msg;
      msg << "momentum Newton did not converge in " << cfg.max_iters << " iterations (residual " << rnorm
          << ")";
      throw NewtonDivergence(msg.str(), u, res.residual_history);
    }
    ++it;
    const VectorField du = solve_linear(grid, data.tangent(ev.stress), -ev.residual);
    double step = 1.0;
    bool accepted = false;
    const int max_cuts = cfg.line_search == LineSearch::Backtracking ? 20 : 0;
    for (int cut = 0; cut <= max_cuts; ++cut, step *= 0.5) {
      VectorField trial = u + step * du;
      Evaluation tev;
      try {
        tev = data.evaluate(trial);
      } catch (const StrainBoundError&) {
        continue;
      }
      const double tn = tev.residual.norm();
      if (cfg.line_search == LineSearch::None || tn <= (1.0 - 1e-4 * step) * rnorm) {
        u = std::move(trial);
        ev = std::move(tev);
        rnorm = tn;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "momentum line search failed (residual " << rnorm << ")";
      throw NewtonDivergence(msg.str(), u, res.residual_history);
    }
    res.residual_history.push_back(rnorm);
  }
  res.u = std::move(u);
  res.stress = std::move(ev.stress);
  res.iterations = it;
  res.residual_norm = rnorm;
  res.max_strain_norm = ev.max_strain;
  return res;
}

}  // namespace viscofrac
