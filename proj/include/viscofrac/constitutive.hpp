#pragma once

// Pointwise constitutive algebra for the isotropic laws
//   p-growth:                 F(T) = |T|^{p-2} T
//   strain-limiting:          F(T) = T / (1 + |T|^a)^{1/a}
//   regularized strain-lim.:  F_n(T) = F(T) + T / n
// together with their inverses, stress potentials phi (F = dphi/dT), convex
// conjugates phi*, Jacobians dF/dT and the phase-field degradation b(v).
//
// Every law is radial: F(T) = g(|T|) T / |T| with a strictly increasing
// magnitude map g, so inverses and conjugates reduce to scalar problems.

#include <limits>

#include <Eigen/Dense>

#include "viscofrac/sym_tensor.hpp"

namespace viscofrac {

enum class LawKind { PGrowth, StrainLimiting, RegularizedStrainLimiting };

struct ConstitutiveLaw {
  LawKind kind = LawKind::PGrowth;
  double p = 2.0;  // PGrowth only
  double a = 1.0;  // strain-limiting kinds
  int n = 1;       // regularized kind only

  static ConstitutiveLaw p_growth(double p);
  static ConstitutiveLaw strain_limiting(double a);
  static ConstitutiveLaw regularized(double a, int n);

  /// Throws std::invalid_argument if a parameter read by `kind` is out of range.
  void validate() const;

  bool is_strain_limiting() const { return kind != LawKind::PGrowth; }
  /// Hölder conjugate p' = p / (p - 1).
  double conjugate_exponent() const { return p / (p - 1.0); }
};

/// Sentinel returned by conjugate_potential outside the strain bound.
inline constexpr double kInfiniteEnergy = std::numeric_limits<double>::infinity();

/// Radial magnitude map g(t) = |F(T)| for |T| = t.
double response_magnitude(const ConstitutiveLaw& law, double t);
/// g'(t).
double response_magnitude_derivative(const ConstitutiveLaw& law, double t);
/// Solves g(t) = s for t >= 0 (tol relative to the result).
double inverse_response_magnitude(const ConstitutiveLaw& law, double s, double tol = 1e-12);

SymTensor response(const ConstitutiveLaw& law, const SymTensor& stress);
/// F on the full matrix space R^{d x d}.
Eigen::MatrixXd response(const ConstitutiveLaw& law, const Eigen::MatrixXd& stress);

/// T with F(T) = S. Throws StrainBoundError for |S| >= 1 under the
/// unregularized strain-limiting law, and Error if the scalar root-find fails.
SymTensor inverse_response(const ConstitutiveLaw& law, const SymTensor& strain, double tol = 1e-12);

/// phi(T): |T|^p / p, or int_0^{|T|} t (1 + t^a)^{-1/a} dt (+ |T|^2 / (2n)).
double potential(const ConstitutiveLaw& law, const SymTensor& stress);

/// phi*(S). Returns kInfiniteEnergy for |S| >= 1 under the unregularized
/// strain-limiting law.
double conjugate_potential(const ConstitutiveLaw& law, const SymTensor& strain);

/// dF/dT on the full index space. Throws Error("singular Jacobian") for
/// p-growth with p < 2 at T = 0.
FourthOrderTensor response_jacobian(const ConstitutiveLaw& law, const SymTensor& stress);

/// Jacobian with |T| replaced by sqrt(|T|^2 + mu^2) in the p-growth scalar
/// factors. Identical to response_jacobian for the strain-limiting kinds.
/// Only meant for Newton linearizations.
FourthOrderTensor mollified_response_jacobian(const ConstitutiveLaw& law, const SymTensor& stress,
                                              double mu);

/// Mandel matrix of d(F^{-1})/dS at S = F(T), i.e. the inverse of the
/// Mandel restriction of the (mollified) response Jacobian at T.
Eigen::MatrixXd inverse_response_tangent(const ConstitutiveLaw& law, const SymTensor& stress,
                                         double mu);

/// Constants of min{1, 2^{-1+1/a}} (1+y) <= (1+y^a)^{1/a} <= max{1, 2^{-1+1/a}} (1+y).
struct GrowthBounds {
  double lower;
  double upper;
};
GrowthBounds growth_bounds(double a);

// ---------------------------------------------------------------------------
// Degradation of the stiffness by the phase field.

enum class Section { Two, Three };

struct DegradationSpec {
  Section section = Section::Two;
  double eta = 1e-3;
};

struct Degradation {
  double b;
  double b_prime;
};

/// section = 2: b = v^2 + eta. section = 3: b = max{0, v}^2 + eta.
Degradation degradation(const DegradationSpec& spec, double v);
/// Second derivative used by Newton-type phase-field solvers (2 or 0).
double degradation_curvature(const DegradationSpec& spec, double v);

}  // namespace viscofrac
