#include "viscofrac/phasefield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <Eigen/SparseCholesky>

namespace viscofrac {

void PhaseStepInput::validate() const {
  if (grid == nullptr) throw std::invalid_argument("phase-field step without a grid");
  if (!(eps_pf > 0.0)) throw std::invalid_argument("eps_pf must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (elastic_density.size() != grid->cell_count())
    throw std::invalid_argument("elastic density does not match the grid");
  if (v_prev.size() != grid->node_count()) throw std::invalid_argument("phase field does not match the grid");
  for (Eigen::Index c = 0; c < elastic_density.size(); ++c)
    if (!(elastic_density[c] >= 0.0) || !std::isfinite(elastic_density[c]))
      throw std::invalid_argument("elastic density must be finite and nonnegative");
}

int PhaseStepInput::order() const { return k > 0 ? k : default_hk_order(grid->dim()); }

double KKTReport::tolerance() const { return 1e-8 * (1.0 + std::abs(objective)) + gradient_roundoff; }

double KKTReport::pairing_tolerance() const { return 1e-8 * (1.0 + std::abs(objective)) + pairing_roundoff; }

bool KKTReport::satisfied() const {
  return min_directional_derivative >= -tolerance() && std::abs(rate_pairing_residual) <= pairing_tolerance() &&
         max_constraint_violation <= 0.0;
}

Eigen::VectorXd nodal_elastic_weights(const Grid& grid, const Eigen::VectorXd& elastic_density,
                                      double alpha) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(grid.node_count());
  const double share = grid.cell_volume() / (alpha * grid.nodes_per_cell());
  for (int c = 0; c < grid.cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    for (int a = 0; a < grid.nodes_per_cell(); ++a) e[nodes[a]] += share * elastic_density[c];
  }
  return e;
}

namespace {

// J(v) = 1/2 v'Qv - q'v + const on each piece {v_i < 0} / {v_i >= 0} (section = 3),
// or globally (section = 2). Q = diag(curv_i 2 e_i + w_i / 2eps) + 2 eps L + G / dt.
// The rate part is evaluated as G (v - v_prev) / dt.
class Problem {
 public:
  explicit Problem(const PhaseStepInput& in) : in_(in), grid_(*in.grid) {
    in.validate();
    e_ = nodal_elastic_weights(grid_, in.elastic_density, in.alpha);
    const int nn = grid_.node_count();
    w_ = Eigen::Map<const Eigen::VectorXd>(grid_.node_weights().data(), nn);
    base_ = SparseMatrix(2.0 * in.eps_pf * gradient_energy_matrix(grid_));
    q_ = w_ / (2.0 * in.eps_pf);
    SparseMatrix diag(nn, nn);
    diag.setIdentity();
    diag.diagonal() = w_ / (2.0 * in.eps_pf);
    base_ += diag;
    hess_ = base_;
    if (in.rate_term) {
      // Kept apart from base_: G v / dt - G v_prev / dt cancels badly near v_prev.
      gram_ = in.gram ? in.gram : std::make_shared<const SparseMatrix>(hk_gram(grid_, in.order()));
      hess_ += SparseMatrix(*gram_ / in.dt);
    }
    for (int n = 0; n < nn; ++n)
      if (!grid_.is_dirichlet_node(n)) free_.push_back(n);
  }

  const std::vector<int>& free_nodes() const { return free_; }

  double objective(const ScalarField& v) const {
    const DegradationSpec spec{in_.section, in_.eta};
    double elastic = 0.0;
    for (int n = 0; n < grid_.node_count(); ++n) elastic += e_[n] * degradation(spec, v[n]).b;
    double l2 = 0.0;
    for (int n = 0; n < grid_.node_count(); ++n) l2 += w_[n] * (1.0 - v[n]) * (1.0 - v[n]);
    const SparseMatrix lap = gradient_energy_matrix(grid_);
    double j = elastic + l2 / (4.0 * in_.eps_pf) + in_.eps_pf * v.dot(lap * v);
    if (in_.rate_term) {
      const Eigen::VectorXd dv = v - in_.v_prev;
      j += dv.dot(*gram_ * dv) / (2.0 * in_.dt);
    }
    return j;
  }

  ScalarField gradient(const ScalarField& v) const {
    const DegradationSpec spec{in_.section, in_.eta};
    ScalarField g = base_ * v - q_;
    if (in_.rate_term) g += (*gram_ * (v - in_.v_prev)) / in_.dt;
    for (int n = 0; n < grid_.node_count(); ++n) g[n] += e_[n] * degradation(spec, v[n]).b_prime;
    return g;
  }

  // Bound on the floating-point error of each gradient entry: a multiple of
  // the unit roundoff times the sum of the magnitudes of its terms. The rate
  // part also carries the representation error of v itself, eps |v|.
  ScalarField gradient_roundoff(const ScalarField& v) const {
    const DegradationSpec spec{in_.section, in_.eta};
    ScalarField r = q_.cwiseAbs();
    for (int col = 0; col < base_.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(base_, col); it; ++it) r[it.row()] += std::abs(it.value() * v[col]);
    if (in_.rate_term) {
      const ScalarField dv = v - in_.v_prev;
      for (int col = 0; col < gram_->outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(*gram_, col); it; ++it)
          r[it.row()] += std::abs(it.value()) * (std::abs(dv[col]) + std::abs(v[col])) / in_.dt;
    }
    for (int n = 0; n < grid_.node_count(); ++n) r[n] += std::abs(e_[n] * degradation(spec, v[n]).b_prime);
    return 8.0 * std::numeric_limits<double>::epsilon() * r;
  }

  // Hessian on the piece containing v.
  SparseMatrix hessian(const ScalarField& v) const {
    const DegradationSpec spec{in_.section, in_.eta};
    SparseMatrix h = hess_;
    for (int n = 0; n < grid_.node_count(); ++n)
      h.coeffRef(n, n) += e_[n] * degradation_curvature(spec, v[n]);
    return h;
  }

  bool negative_piece(double v) const { return in_.section == Section::Three && v < 0.0; }

 private:
  const PhaseStepInput& in_;
  const Grid& grid_;
  Eigen::VectorXd e_, w_, q_;
  SparseMatrix base_, hess_;
  std::shared_ptr<const SparseMatrix> gram_;
  std::vector<int> free_;
};

// Solves H_SS x_S = -(g_S - H_S* v) restricted to nodes in `solve`, i.e. the
// Newton step of a quadratic for the listed nodes with the others frozen.
Eigen::VectorXd reduced_solve(const SparseMatrix& h, const std::vector<int>& solve,
                              const Eigen::VectorXd& rhs) {
  const int m = static_cast<int>(solve.size());
  std::vector<int> pos(h.rows(), -1);
  for (int i = 0; i < m; ++i) pos[solve[i]] = i;
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < m; ++i)
    for (SparseMatrix::InnerIterator it(h, solve[i]); it; ++it)
      if (pos[it.row()] >= 0) trip.emplace_back(pos[it.row()], i, it.value());
  SparseMatrix hs(m, m);
  hs.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(hs);
  if (ldlt.info() != Eigen::Success) throw Error("phase-field Hessian factorization failed");
  return ldlt.solve(rhs);
}

double kkt_stationarity(const Problem& pb, const ScalarField& g, const ScalarField& v,
                        const ScalarField& vp) {
  double worst = std::numeric_limits<double>::infinity();
  for (int n : pb.free_nodes()) {
    worst = std::min(worst, -g[n]);
    if (v[n] < vp[n]) worst = std::min(worst, g[n]);
  }
  return worst;
}

// Primal-dual active set iteration. Returns false on cycling or breakdown.
bool pdas(const Problem& pb, const ScalarField& vp, ScalarField& v, int& iters) {
  const auto& fr = pb.free_nodes();
  std::set<std::vector<char>> seen;
  std::vector<char> last;
  ScalarField g = pb.gradient(v);
  for (iters = 0; iters < 200; ++iters) {
    // Active: v_i = vp_i. Multiplier lambda = -g; complementarity with c_i = H_ii.
    const SparseMatrix h = pb.hessian(v);
    std::vector<char> sig(vp.size() * 2, 0);
    std::vector<int> inactive;
    ScalarField next = v;
    for (int n : fr) {
      const double c = h.coeff(n, n);
      const bool active = -g[n] + c * (v[n] - vp[n]) > 0.0 ||
                          (v[n] >= vp[n] - 1e-12 && -g[n] >= 0.0);
      sig[2 * n] = active;
      sig[2 * n + 1] = pb.negative_piece(v[n]);
      if (active) next[n] = vp[n]; else inactive.push_back(n);
    }
    // The same sets twice in a row is a fixed point; a repeat after other
    // sets in between is a cycle.
    if (sig == last) return true;
    if (!seen.insert(sig).second) return false;
    last = sig;
    if (!inactive.empty()) {
      // Newton step on the inactive nodes with the active ones moved to vp.
      const ScalarField g_next = g + h * (next - v);
      Eigen::VectorXd rhs(inactive.size());
      for (std::size_t i = 0; i < inactive.size(); ++i) rhs[i] = -g_next[inactive[i]];
      const Eigen::VectorXd dx = reduced_solve(h, inactive, rhs);
      for (std::size_t i = 0; i < inactive.size(); ++i) next[inactive[i]] += dx[i];
    }
    v = next;
    g = pb.gradient(v);
  }
  return false;
}

// Primal active-set method for the quadratic model
//   m(w) = g'(w - v) + 1/2 (w - v)' H (w - v),  w <= vp on the free nodes,
// started from the feasible point v. Monotone in m and finite: a working-set
// minimizer is never revisited. Constraints whose multiplier exceeds the
// gradient roundoff are released together; after a blocked zero step only
// the most violated one is.
bool active_set_qp(const Problem& pb, const SparseMatrix& h, const ScalarField& g, const ScalarField& v,
                   const ScalarField& vp, ScalarField& w, int& iters) {
  const auto& fr = pb.free_nodes();
  w = v;
  std::vector<char> working(v.size(), 0);
  for (int n : fr) working[n] = w[n] >= vp[n];
  bool single_release = false;
  const int cap = 20 * static_cast<int>(fr.size()) + 20;
  for (int it = 0; it < cap; ++it, ++iters) {
    std::vector<int> inactive;
    for (int n : fr)
      if (!working[n]) inactive.push_back(n);
    const ScalarField gm = g + h * (w - v);
    ScalarField d = ScalarField::Zero(v.size());
    if (!inactive.empty()) {
      Eigen::VectorXd rhs(inactive.size());
      for (std::size_t i = 0; i < inactive.size(); ++i) rhs[i] = -gm[inactive[i]];
      const Eigen::VectorXd dx = reduced_solve(h, inactive, rhs);
      for (std::size_t i = 0; i < inactive.size(); ++i) d[inactive[i]] = dx[i];
    }
    // Largest feasible step along d, up to the working-set minimizer.
    double step = 1.0;
    for (int n : inactive)
      if (d[n] > 0.0) step = std::min(step, (vp[n] - w[n]) / d[n]);
    step = std::max(step, 0.0);
    for (int n : inactive) w[n] = std::min(vp[n], w[n] + step * d[n]);
    if (step < 1.0) {
      for (int n : inactive)
        if (d[n] > 0.0 && w[n] + 1e-15 * (1.0 + std::abs(w[n])) >= vp[n]) {
          w[n] = vp[n];
          working[n] = 1;
        }
      single_release = step == 0.0;
      continue;
    }
    // At the working-set minimizer: release constraints that want to decrease.
    const ScalarField gw = g + h * (w - v);
    const ScalarField noise = pb.gradient_roundoff(w);
    int worst = -1;
    bool released = false;
    for (int n : fr) {
      if (!working[n] || gw[n] <= noise[n]) continue;
      if (worst < 0 || gw[n] > gw[worst]) worst = n;
      if (!single_release) {
        working[n] = 0;
        released = true;
      }
    }
    if (worst < 0) return true;
    if (single_release && !released) working[worst] = 0;
    single_release = false;
  }
  return false;
}

// Newton's method on the piecewise quadratic J: each step minimizes the
// quadratic model of the current piece under the bounds, then backtracks on
// J along the segment (which stays feasible). Exact once the model's
// minimizer lies in the same piece.
bool active_set_newton(const Problem& pb, const ScalarField& vp, ScalarField& v, int& iters) {
  const auto& fr = pb.free_nodes();
  for (int n : fr) v[n] = std::min(v[n], vp[n]);
  for (int outer = 0; outer < 50; ++outer) {
    const ScalarField g = pb.gradient(v);
    const SparseMatrix h = pb.hessian(v);
    ScalarField w;
    if (!active_set_qp(pb, h, g, v, vp, w, iters)) return false;
    const ScalarField d = w - v;
    bool same_piece = true;
    for (int n : fr) same_piece = same_piece && pb.negative_piece(w[n]) == pb.negative_piece(v[n]);
    if (same_piece) {
      v = w;
      return true;
    }
    const double j0 = pb.objective(v), slope = g.dot(d);
    double s = 1.0;
    while (s > 1e-12 && pb.objective(v + s * d) > j0 + 1e-4 * s * slope) s *= 0.5;
    v += s * d;
    for (int n : fr) v[n] = std::min(v[n], vp[n]);
  }
  return false;
}

}  // namespace

double phasefield_objective(const PhaseStepInput& in, const ScalarField& v) {
  return Problem(in).objective(v);
}

ScalarField phasefield_gradient(const PhaseStepInput& in, const ScalarField& v) {
  return Problem(in).gradient(v);
}

ScalarField phasefield_step(const PhaseStepInput& in, PhaseStepStats* stats) {
  const Problem pb(in);
  const ScalarField& vp = in.v_prev;
  PhaseStepStats local;
  PhaseStepStats& st = stats ? *stats : local;
  st = PhaseStepStats{};

  // v_prev itself is optimal iff no node wants to decrease.
  const ScalarField g0 = pb.gradient(vp);
  const double noise = 1e-14 * (1.0 + g0.cwiseAbs().maxCoeff());
  bool optimal = true;
  for (int n : pb.free_nodes()) optimal = optimal && g0[n] <= noise;
  if (optimal) {
    st.unchanged = true;
    return vp;
  }

  ScalarField v = vp;
  bool ok = pdas(pb, vp, v, st.iterations);
  if (!ok) {
    st.used_fallback = true;
    v = vp;
    int extra = 0;
    ok = active_set_newton(pb, vp, v, extra);
    st.iterations += extra;
  }
  for (int n : pb.free_nodes()) v[n] = std::min(v[n], vp[n]);

  const KKTReport report = kkt_residual(in, v);
  if (!ok || !report.satisfied()) {
    std::ostringstream msg;
    msg << "phase-field solver did not converge (min directional derivative "
        << report.min_directional_derivative << ", rate pairing " << report.rate_pairing_residual << ")";
    throw PhaseFieldError(msg.str(), report);
  }
  return v;
}

KKTReport kkt_residual(const PhaseStepInput& in, const ScalarField& v_m) {
  const Problem pb(in);
  const ScalarField& vp = in.v_prev;
  const ScalarField g = pb.gradient(v_m);
  KKTReport r;
  r.objective = pb.objective(v_m);
  r.min_directional_derivative = pb.free_nodes().empty() ? 0.0 : kkt_stationarity(pb, g, v_m, vp);
  double pairing = 0.0;
  for (int n : pb.free_nodes()) pairing += g[n] * (v_m[n] - vp[n]);
  r.rate_pairing_residual = pairing / in.dt;
  r.max_constraint_violation = (v_m - vp).maxCoeff();
  const ScalarField round = pb.gradient_roundoff(v_m);
  for (int n : pb.free_nodes()) {
    r.gradient_roundoff = std::max(r.gradient_roundoff, round[n]);
    r.pairing_roundoff += round[n] * std::abs(v_m[n] - vp[n]) / in.dt;
  }
  for (int n : pb.free_nodes())
    if (std::abs(v_m[n] - vp[n]) <= 1e-12) ++r.active_set_size;
  return r;
}

}  // namespace viscofrac
