#include "viscofrac/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace viscofrac {

bool ValidationResult::ok() const {
  return std::none_of(findings.begin(), findings.end(), [](const Finding& f) { return f.error; });
}

double ramp_psi(double tau) {
  const double s = std::clamp(2.0 * tau - 1.0, 0.0, 1.0);
  return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

std::array<double, 2> neumann_ramp(const std::array<double, 2>& g, const SymTensor& initial_strain,
                                   const ConstitutiveLaw& law_n, const std::array<double, 2>& normal,
                                   double t) {
  const double psi = ramp_psi(law_n.n * t);
  std::array<double, 2> out{};
  const int d = initial_strain.dim();
  if (psi == 0.0) {
    for (int i = 0; i < d; ++i) out[i] = g[i];
    return out;
  }
  const SymTensor stress = inverse_response(law_n, initial_strain);
  for (int i = 0; i < d; ++i) {
    double tn = 0.0;
    for (int j = 0; j < d; ++j) tn += stress(i, j) * normal[j];
    out[i] = tn * psi + g[i] * (1.0 - psi);
  }
  return out;
}

VectorField sample_vector(const Grid& grid, const std::array<Expression, 2>& e) {
  const int d = grid.dim();
  VectorField u(grid.dof_count());
  for (int n = 0; n < grid.node_count(); ++n) {
    const auto x = grid.node_coords(n);
    const ExprVars vars{x[0], x[1], 0.0, 0.0, 0.0};
    for (int c = 0; c < d; ++c) u[n * d + c] = e[c](vars);
  }
  apply_dirichlet(grid, u);
  return u;
}

ScalarField sample_scalar(const Grid& grid, const Expression& e) {
  ScalarField v(grid.node_count());
  for (int n = 0; n < grid.node_count(); ++n) {
    const auto x = grid.node_coords(n);
    v[n] = e(ExprVars{x[0], x[1], 0.0, 0.0, 0.0});
  }
  apply_phase_dirichlet(grid, v);
  return v;
}

namespace {

TensorField initial_driving_strain(const Grid& grid, double alpha, const VectorField& u0, const VectorField& u1) {
  return sym_gradient(grid, u1 + alpha * u0);
}

std::array<double, 2> eval_traction(const std::array<Expression, 2>& g, double t, const FacePoint& p) {
  const ExprVars vars{p.x[0], p.x[1], t, p.normal[0], p.normal[1]};
  return {g[0](vars), g[1](vars)};
}

PhaseStepInput phase_input(const SimConfig& c, const Grid& grid, const VectorField& u, const ScalarField& v_prev) {
  PhaseStepInput in;
  in.grid = &grid;
  in.elastic_density = elastic_density(grid, c.law, c.alpha, u);
  in.v_prev = v_prev;
  in.eps_pf = c.eps_pf;
  in.alpha = c.alpha;
  in.section = c.section;
  in.eta = c.eta;
  in.k = c.hk_order();
  return in;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

LoadModel::LoadModel(const SimConfig& config, const Grid& grid, const VectorField& u0, const VectorField& u1)
    : config_(config), grid_(grid), initial_strain_(initial_driving_strain(grid, config.alpha, u0, u1)) {}

VectorField LoadModel::operator()(double t) const {
  const bool ramped = config_.section == Section::Three && config_.ramp &&
                      config_.law.kind == LawKind::RegularizedStrainLimiting;
  const TractionFn g = [&](double time, const FacePoint& p) -> std::array<double, 2> {
    std::array<double, 2> val{0.0, 0.0};
    const auto it = config_.traction.find(p.face);
    if (it != config_.traction.end()) val = eval_traction(it->second, time, p);
    if (ramped) val = neumann_ramp(val, initial_strain_[p.cell], config_.law, p.normal, time);
    return val;
  };
  const BodyForceFn f = [&](double time, const std::array<double, 2>& x) -> std::array<double, 2> {
    const ExprVars vars{x[0], x[1], time, 0.0, 0.0};
    return {config_.body_force[0](vars), config_.body_force[1](vars)};
  };
  return boundary_load(grid_, g, t) + body_load(grid_, f, t);
}

ValidationResult validate(const SimConfig& c) {
  ValidationResult r;
  auto error = [&](const std::string& cond, const std::string& msg) { r.findings.push_back({cond, msg, true}); };
  auto note = [&](const std::string& cond, const std::string& msg) { r.findings.push_back({cond, msg, false}); };

  if (!(c.dt > 0.0)) error("time step", "dt must be positive");
  if (c.t_final < 0.0 || (c.t_final > 0.0 && c.t_final < c.dt)) error("time horizon", "t_final must be 0 or at least dt");
  if (c.dt > 0.0 && c.t_final > 0.0 && std::abs(c.steps() * c.dt - c.t_final) > 1e-9 * c.t_final)
    note("time horizon", "t_final is not a multiple of dt; using " + std::to_string(c.steps()) + " steps");
  if (!(c.alpha > 0.0)) error("model", "alpha must be positive");
  if (!(c.eta > 0.0)) error("model", "eta must be positive");
  if (!(c.eps_pf > 0.0)) error("model", "eps_pf must be positive");
  try {
    c.law.validate();
  } catch (const std::exception& e) {
    error("constitutive law", e.what());
  }
  if (!r.ok()) return r;

  std::optional<Grid> grid_opt;
  try {
    grid_opt.emplace(c.make_grid());
  } catch (const std::exception& e) {
    error("grid", e.what());
    return r;
  }
  const Grid& grid = *grid_opt;
  const VectorField u0 = sample_vector(grid, c.u0);
  const VectorField u1 = sample_vector(grid, c.u1);
  const ScalarField v0 = sample_scalar(grid, c.v0);
  if (!u0.allFinite() || !u1.allFinite() || !v0.allFinite()) {
    error("initial data", "initial data evaluate to non-finite values");
    return r;
  }

  if (c.section == Section::Two) {
    if (c.law.kind != LawKind::PGrowth) error("constitutive law", "section = 2 requires the p-growth law");
    if (v0.minCoeff() < 0.0 || v0.maxCoeff() > 1.0) error("initial phase field", "v0 must lie in [0, 1] at every node");
    if (!r.ok()) return r;
    try {
      const PhaseStepInput in = phase_input(c, grid, u0, v0);
      r.v0_initial = phasefield_step(in);
    } catch (const std::exception& e) {
      error("initial minimization", e.what());
    }
    return r;
  }

  // section = 3
  if (c.law.kind != LawKind::RegularizedStrainLimiting)
    error("constitutive law", "section = 3 requires the regularized strain-limiting law");
  const int k = c.hk_order();
  if (!(k > c.dim / 2.0 + 1.0)) error("rate term order", "k must exceed d/2 + 1");
  if (k > 3) error("rate term order", "k > 3 is not supported");

  const TensorField eps0 = sym_gradient(grid, u0);
  const TensorField drive = initial_driving_strain(grid, c.alpha, u0, u1);
  double cstar = 0.0;
  for (int cell = 0; cell < grid.cell_count(); ++cell)
    cstar = std::max({cstar, (c.alpha * eps0[cell]).norm(), drive[cell].norm()});
  r.safety_strain = cstar;
  if (!(cstar < 1.0 - 1e-6))
    error("safety strain", "max{|eps(alpha u0)|, |eps(u1 + alpha u0)|} = " + fmt(cstar) + " is not below 1");
  if (!r.ok()) return r;

  // Compatibility of g(0) with the unregularized law on Gamma_N, face-lumped.
  const ConstitutiveLaw limit = ConstitutiveLaw::strain_limiting(c.law.a);
  const DegradationSpec spec{c.section, c.eta};
  const TractionFn g0 = [&](double t, const FacePoint& p) -> std::array<double, 2> {
    const auto it = c.traction.find(p.face);
    if (it == c.traction.end()) return {0.0, 0.0};
    return eval_traction(it->second, t, p);
  };
  const TractionFn target = [&](double, const FacePoint& p) -> std::array<double, 2> {
    const SymTensor stress = inverse_response(limit, drive[p.cell]);
    const double b = degradation(spec, v0[p.node]).b;
    std::array<double, 2> out{0.0, 0.0};
    for (int i = 0; i < grid.dim(); ++i)
      for (int j = 0; j < grid.dim(); ++j) out[i] += b * stress(i, j) * p.normal[j];
    return out;
  };
  const VectorField lg = boundary_load(grid, g0, 0.0);
  const VectorField lt = boundary_load(grid, target, 0.0);
  const double scale = 1.0 + lt.lpNorm<Eigen::Infinity>();
  r.compatibility_mismatch = (lg - lt).lpNorm<Eigen::Infinity>() / scale;
  if (r.compatibility_mismatch > 1e-8)
    error("Neumann compatibility", "g(0) differs from b(v0) F^{-1}(eps(u1 + alpha u0)) n by " +
                                       fmt(r.compatibility_mismatch) + " (relative)");
  return r;
}

SimOutput run(const SimConfig& c, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SimOutput out;
  out.validation = validate(c);
  if (!out.validation.ok()) {
    std::ostringstream msg;
    msg << "invalid configuration:";
    for (const auto& f : out.validation.findings)
      if (f.error) msg << "\n  " << f.condition << ": " << f.message;
    throw std::invalid_argument(msg.str());
  }

  const Grid grid = c.make_grid();
  const int steps = c.steps();
  const double dt = c.dt;
  const VectorField u0 = sample_vector(grid, c.u0);
  const VectorField u1 = sample_vector(grid, c.u1);
  const LoadModel load(c, grid, u0, u1);
  const EnergyModel model{c.law, {c.section, c.eta}, c.alpha, c.eps_pf};

  ScalarField v = c.section == Section::Two ? out.validation.v0_initial : sample_scalar(grid, c.v0);
  VectorField u_prev2 = u0 - dt * u1;  // u_{m-2} at m = 1
  VectorField u_prev = u0;
  VectorField l_prev = load(0.0);

  std::shared_ptr<const SparseMatrix> gram;
  if (c.section == Section::Three) gram = std::make_shared<const SparseMatrix>(hk_gram(grid, c.hk_order()));

  auto snapshot = [&](int m, const VectorField& u, const ScalarField& vv, const TensorField& stress) {
    Snapshot s{m, m * dt, u, vv, Eigen::VectorXd::Zero(grid.cell_count())};
    for (std::size_t i = 0; i < stress.size(); ++i) s.stress_norm[static_cast<Eigen::Index>(i)] = stress[i].norm();
    out.snapshots.push_back(std::move(s));
  };

  out.ledger.start(energies(grid, model, u0, u1, v, l_prev), 0.0);
  {
    TensorField stress0 = initial_driving_strain(grid, c.alpha, u0, u1);
    for (auto& s : stress0) s = inverse_response(c.law, s);
    snapshot(0, u0, v, stress0);
  }
  if (options.keep_trajectory) {
    out.u_history.push_back(u0);
    out.v_history.push_back(v);
  }

  for (int m = 1; m <= steps; ++m) {
    const double t = m * dt;
    MomentumStepInput mi;
    mi.grid = &grid;
    mi.u_prev = u_prev;
    mi.u_prev2 = u_prev2;
    mi.v_prev = v;
    mi.dt = dt;
    mi.alpha = c.alpha;
    mi.law = c.law;
    mi.degradation = {c.section, c.eta};
    mi.load = load(t);

    MomentumResult mom;
    try {
      mom = momentum_step(mi, c.newton);
    } catch (const NewtonDivergence& e) {
      throw StepFailure(m, e.what(), u_prev, v, e.residual_history);
    } catch (const Error& e) {
      throw StepFailure(m, e.what(), u_prev, v, {});
    }

    PhaseStepInput pi;
    ScalarField v_new;
    StepRecord rec;
    try {
      pi = phase_input(c, grid, mom.u, v);
      pi.dt = dt;
      pi.rate_term = c.section == Section::Three;
      pi.gram = gram;
      PhaseStepStats stats;
      v_new = phasefield_step(pi, &stats);
      rec.phase_fallback = stats.used_fallback;
      rec.kkt = kkt_residual(pi, v_new);
    } catch (const Error& e) {
      throw StepFailure(m, e.what(), mom.u, v, mom.residual_history);
    } catch (const std::invalid_argument& e) {
      throw StepFailure(m, e.what(), mom.u, v, mom.residual_history);
    }
    rec.newton_iters = mom.iterations;
    rec.newton_residual = mom.residual_norm;
    rec.irreversibility_violation = (v_new - v).maxCoeff();

    const VectorField du = (mom.u - u_prev) / dt;
    StepIncrements inc;
    inc.dissipation = dissipation_increment(grid, c.law, c.alpha, cell_degradation(grid, mi.degradation, v),
                                            sym_gradient(grid, du), sym_gradient(grid, mom.u), dt);
    if (gram) inc.rate_penalty = rate_penalty_increment(*gram, v_new, v, dt);
    inc.external_proof = (mi.load - l_prev).dot(u_prev);
    inc.external_statement = (mi.load - l_prev).dot(mom.u);
    inc.newton_residual = mom.residual_norm;
    inc.displacement_change = (mom.u - u_prev).norm();
    inc.phase_pairing = std::abs(rec.kkt.rate_pairing_residual) * dt;
    inc.newton_iters = mom.iterations;
    inc.max_strain_norm = mom.max_strain_norm;
    const EnergyReport& rep = out.ledger.record(m, t, energies(grid, model, mom.u, du, v_new, mi.load), inc);

    out.max_strain_norm = std::max(out.max_strain_norm, mom.max_strain_norm);
    for (const auto& s : mom.stress) out.max_stress_norm = std::max(out.max_stress_norm, s.norm());
    out.steps.push_back(rec);
    if (m % c.cadence == 0) snapshot(m, mom.u, v_new, mom.stress);
    if (options.keep_trajectory) {
      out.u_history.push_back(mom.u);
      out.v_history.push_back(v_new);
    }
    if (options.progress) options.progress(m, rep);

    u_prev2 = std::move(u_prev);
    u_prev = mom.u;
    v = std::move(v_new);
    l_prev = mi.load;
  }
  out.u_final = u_prev;
  out.v_final = v;
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace viscofrac
