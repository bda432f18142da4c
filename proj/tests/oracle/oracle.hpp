#pragma once

// Brute-force references for the test suite. Nothing here calls the code it
// is used to check: the radial maps, quadratures, element operators and the
// phase-field objective are all re-derived locally.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "viscofrac/constitutive.hpp"
#include "viscofrac/grid.hpp"
#include "viscofrac/phasefield.hpp"

namespace viscofrac::oracle {

struct OracleConfig {
  double tolerance = 1e-10;
  int max_sweeps = 2000000;
  std::uint64_t seed = 12345;
};

/// Magnitude map |F(T)| for |T| = t, written out independently.
double magnitude(const ConstitutiveLaw& law, double t);

/// T with F(T) = S by bisection on the radial equation to 1e-12.
/// Throws std::domain_error for |S| >= 1 under the unregularized strain-limiting law.
SymTensor numeric_inverse(const ConstitutiveLaw& law, const SymTensor& s);

/// Central differences of F on the full d x d matrix space.
FourthOrderTensor fd_jacobian(const ConstitutiveLaw& law, const SymTensor& t, double h_fd);

/// phi(T) and phi*(S) by tanh-sinh quadrature of the radial integrals
/// int_0^|T| g(s) ds and int_0^|S| g^{-1}(s) ds.
double potential_quadrature(const ConstitutiveLaw& law, double t);
double conjugate_quadrature(const ConstitutiveLaw& law, double s);

/// Cyclic projected coordinate descent for the phase-field step until the
/// largest nodal change in a sweep is below cfg.tolerance.
Eigen::VectorXd brute_phasefield(const PhaseStepInput& in, const OracleConfig& cfg = {});
/// The phase-field objective assembled from scratch.
double brute_objective(const PhaseStepInput& in, const Eigen::VectorXd& v);

/// Sum in a shuffled order (seeded).
double random_order_sum(std::vector<double> terms, std::uint64_t seed);

/// Linear Kelvin-Voigt trajectory (p = 2) with a dense direct solve per step:
///   [M/dt^2 + (1/dt + alpha) K_b] u_m = l_m + M (2 u_{m-1} - u_{m-2}) / dt^2 + K_b u_{m-1} / dt,
/// K_b = sum_cells vol b(v_{m-1}) B'B, starting from u_0 = u_1 = 0.
/// `v_history[m]` is v_m; `loads[m]` is l_m (m = 0..M).
std::vector<Eigen::VectorXd> linear_kv_trajectory(const Grid& grid, double dt, double alpha, double eta,
                                                  const std::vector<Eigen::VectorXd>& v_history,
                                                  const std::vector<Eigen::VectorXd>& loads);

/// Nodal load of a traction (gx(t), gy(t)) uniform on the right face of a 2D
/// grid, lumped per edge.
Eigen::VectorXd right_face_load(const Grid& grid, double gx, double gy);

}  // namespace viscofrac::oracle
