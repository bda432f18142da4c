#include "viscofrac/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "viscofrac/error.hpp"
#include "viscofrac/quadrature.hpp"

namespace viscofrac {

namespace {

constexpr double kQuadratureTol = 1e-10;

// F(T) = c1 T and dF/dT = c1 I + c2 T (x) T for a radial law.
struct RadialCoefficients {
  double c1;
  double c2;
};

void require_finite(const SymTensor& t) {
  if (!t.is_finite()) throw NonFiniteError();
}

double strain_limiting_factor(double a, double t) {  // (1 + t^a)^{-1/a}
  return std::pow(1.0 + std::pow(t, a), -1.0 / a);
}

// int_0^t s (1 + s^a)^{-1/a} ds
double strain_limiting_potential(double a, double t) {
  if (t == 0.0) return 0.0;
  if (a == 1.0) return t - std::log1p(t);
  if (a == 2.0) return t * t / (std::sqrt(1.0 + t * t) + 1.0);
  double sum = 0.0;
  const double piece = t / 4.0;
  for (int k = 0; k < 4; ++k)
    sum += adaptive_simpson([a](double s) { return s * strain_limiting_factor(a, s); }, k * piece,
                            (k + 1) * piece, kQuadratureTol / 4.0);
  return sum;
}

// int_0^t s g'(s) ds for g(s) = s (1 + s^a)^{-1/a}; equals phi*(g(t)).
double strain_limiting_conjugate_from_stress(double a, double t) {
  if (t == 0.0) return 0.0;
  if (a == 1.0) {
    // log(1 + t) - t / (1 + t); the series avoids cancellation for small t.
    if (t < 1e-2) {
      double sum = 0.0, power = t;
      for (int k = 2; k <= 9; ++k) {
        power *= t;
        sum += (k % 2 == 0 ? 1.0 : -1.0) * (k - 1.0) / k * power;
      }
      return sum;
    }
    return std::log1p(t) - t / (1.0 + t);
  }
  if (a == 2.0) {
    const double r = std::sqrt(1.0 + t * t);
    return t * t / (r * (1.0 + r));
  }
  double sum = 0.0;
  const double piece = t / 4.0;
  for (int k = 0; k < 4; ++k)
    sum += adaptive_simpson(
        [a](double s) { return s * std::pow(1.0 + std::pow(s, a), -1.0 - 1.0 / a); }, k * piece,
        (k + 1) * piece, kQuadratureTol / 4.0);
  return sum;
}

RadialCoefficients radial_coefficients(const ConstitutiveLaw& law, double t, double mu) {
  switch (law.kind) {
    case LawKind::PGrowth: {
      const double r = mu > 0.0 ? std::sqrt(t * t + mu * mu) : t;
      if (r == 0.0) {
        if (law.p < 2.0) throw Error("singular Jacobian");
        return {law.p == 2.0 ? 1.0 : 0.0, 0.0};
      }
      return {std::pow(r, law.p - 2.0), (law.p - 2.0) * std::pow(r, law.p - 4.0)};
    }
    case LawKind::StrainLimiting:
    case LawKind::RegularizedStrainLimiting: {
      const double a = law.a;
      const double extra = law.kind == LawKind::RegularizedStrainLimiting ? 1.0 / law.n : 0.0;
      if (t == 0.0) return {1.0 + extra, 0.0};
      const double ta = std::pow(t, a);
      const double c1 = std::pow(1.0 + ta, -1.0 / a) + extra;
      const double c2 = -std::pow(t, a - 2.0) * std::pow(1.0 + ta, -1.0 - 1.0 / a);
      return {c1, c2};
    }
  }
  return {0.0, 0.0};
}

FourthOrderTensor radial_jacobian(const SymTensor& stress, RadialCoefficients c) {
  const int d = stress.dim();
  FourthOrderTensor out(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          out(i, j, k, l) = (i == k && j == l ? c.c1 : 0.0) + c.c2 * stress(i, j) * stress(k, l);
  return out;
}

}  // namespace

ConstitutiveLaw ConstitutiveLaw::p_growth(double p) {
  ConstitutiveLaw law{LawKind::PGrowth, p, 1.0, 1};
  law.validate();
  return law;
}

ConstitutiveLaw ConstitutiveLaw::strain_limiting(double a) {
  ConstitutiveLaw law{LawKind::StrainLimiting, 2.0, a, 1};
  law.validate();
  return law;
}

ConstitutiveLaw ConstitutiveLaw::regularized(double a, int n) {
  ConstitutiveLaw law{LawKind::RegularizedStrainLimiting, 2.0, a, n};
  law.validate();
  return law;
}

void ConstitutiveLaw::validate() const {
  switch (kind) {
    case LawKind::PGrowth:
      if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p-growth law requires p > 1");
      break;
    case LawKind::RegularizedStrainLimiting:
      if (n < 1) throw std::invalid_argument("regularized law requires n >= 1");
      [[fallthrough]];
    case LawKind::StrainLimiting:
      if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("strain-limiting law requires a > 0");
      break;
  }
}

double response_magnitude(const ConstitutiveLaw& law, double t) {
  if (t == 0.0) return 0.0;
  switch (law.kind) {
    case LawKind::PGrowth: return std::pow(t, law.p - 1.0);
    case LawKind::StrainLimiting: return t * strain_limiting_factor(law.a, t);
    case LawKind::RegularizedStrainLimiting: return t * strain_limiting_factor(law.a, t) + t / law.n;
  }
  return 0.0;
}

double response_magnitude_derivative(const ConstitutiveLaw& law, double t) {
  switch (law.kind) {
    case LawKind::PGrowth:
      if (t == 0.0) return law.p == 2.0 ? 1.0 : (law.p > 2.0 ? 0.0 : kInfiniteEnergy);
      return (law.p - 1.0) * std::pow(t, law.p - 2.0);
    case LawKind::StrainLimiting:
      return std::pow(1.0 + std::pow(t, law.a), -1.0 - 1.0 / law.a);
    case LawKind::RegularizedStrainLimiting:
      return std::pow(1.0 + std::pow(t, law.a), -1.0 - 1.0 / law.a) + 1.0 / law.n;
  }
  return 0.0;
}

double inverse_response_magnitude(const ConstitutiveLaw& law, double s, double tol) {
  if (s == 0.0) return 0.0;
  switch (law.kind) {
    case LawKind::PGrowth:
      return std::pow(s, law.conjugate_exponent() - 1.0);
    case LawKind::StrainLimiting:
      if (s >= 1.0) throw StrainBoundError();
      return s * std::pow(1.0 - std::pow(s, law.a), -1.0 / law.a);
    case LawKind::RegularizedStrainLimiting: {
      // g is strictly increasing with g(n s) >= s, so [0, n s + 1] brackets the root.
      double lo = 0.0;
      double hi = law.n * s + 1.0;
      for (int it = 0; it < 200 && hi - lo > tol * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (response_magnitude(law, mid) < s) lo = mid; else hi = mid;
      }
      double t = 0.5 * (lo + hi);
      for (int polish = 0; polish < 2; ++polish) {
        const double step = (response_magnitude(law, t) - s) / response_magnitude_derivative(law, t);
        if (t - step >= lo && t - step <= hi) t -= step;
      }
      const double residual = std::abs(response_magnitude(law, t) - s);
      if (!(residual <= 1e-10 * (1.0 + s))) {
        std::ostringstream msg;
        msg << "inverse response root-find did not converge (residual " << residual << ")";
        throw Error(msg.str());
      }
      return t;
    }
  }
  return 0.0;
}

SymTensor response(const ConstitutiveLaw& law, const SymTensor& stress) {
  require_finite(stress);
  const double t = stress.norm();
  if (t == 0.0) return SymTensor(stress.dim());
  return (response_magnitude(law, t) / t) * stress;
}

Eigen::MatrixXd response(const ConstitutiveLaw& law, const Eigen::MatrixXd& stress) {
  if (!stress.allFinite()) throw NonFiniteError();
  const double t = stress.norm();
  if (t == 0.0) return Eigen::MatrixXd::Zero(stress.rows(), stress.cols());
  return (response_magnitude(law, t) / t) * stress;
}

SymTensor inverse_response(const ConstitutiveLaw& law, const SymTensor& strain, double tol) {
  require_finite(strain);
  const double s = strain.norm();
  if (s == 0.0) return SymTensor(strain.dim());
  return (inverse_response_magnitude(law, s, tol) / s) * strain;
}

double potential(const ConstitutiveLaw& law, const SymTensor& stress) {
  require_finite(stress);
  const double t = stress.norm();
  switch (law.kind) {
    case LawKind::PGrowth: return std::pow(t, law.p) / law.p;
    case LawKind::StrainLimiting: return strain_limiting_potential(law.a, t);
    case LawKind::RegularizedStrainLimiting:
      return strain_limiting_potential(law.a, t) + t * t / (2.0 * law.n);
  }
  return 0.0;
}

double conjugate_potential(const ConstitutiveLaw& law, const SymTensor& strain) {
  require_finite(strain);
  const double s = strain.norm();
  if (s == 0.0) return 0.0;
  switch (law.kind) {
    case LawKind::PGrowth: {
      const double q = law.conjugate_exponent();
      return std::pow(s, q) / q;
    }
    case LawKind::StrainLimiting: {
      if (s >= 1.0) return kInfiniteEnergy;
      return strain_limiting_conjugate_from_stress(law.a, inverse_response_magnitude(law, s));
    }
    case LawKind::RegularizedStrainLimiting: {
      const double t = inverse_response_magnitude(law, s);
      return strain_limiting_conjugate_from_stress(law.a, t) + t * t / (2.0 * law.n);
    }
  }
  return 0.0;
}

FourthOrderTensor response_jacobian(const ConstitutiveLaw& law, const SymTensor& stress) {
  require_finite(stress);
  return radial_jacobian(stress, radial_coefficients(law, stress.norm(), 0.0));
}

FourthOrderTensor mollified_response_jacobian(const ConstitutiveLaw& law, const SymTensor& stress,
                                              double mu) {
  require_finite(stress);
  return radial_jacobian(stress, radial_coefficients(law, stress.norm(), mu));
}

Eigen::MatrixXd inverse_response_tangent(const ConstitutiveLaw& law, const SymTensor& stress,
                                         double mu) {
  require_finite(stress);
  const RadialCoefficients c = radial_coefficients(law, stress.norm(), mu);
  const Eigen::VectorXd t = stress.to_mandel();
  // Mandel restriction of c1 I + c2 T (x) T.
  Eigen::MatrixXd block = c.c1 * Eigen::MatrixXd::Identity(t.size(), t.size()) + c.c2 * t * t.transpose();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(block);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 0.0).all())
    throw Error("singular Jacobian");
  return ldlt.solve(Eigen::MatrixXd::Identity(t.size(), t.size()));
}

GrowthBounds growth_bounds(double a) {
  const double k = std::pow(2.0, -1.0 + 1.0 / a);
  return {std::min(1.0, k), std::max(1.0, k)};
}

Degradation degradation(const DegradationSpec& spec, double v) {
  const double w = spec.section == Section::Two ? v : std::max(0.0, v);
  return {w * w + spec.eta, 2.0 * w};
}

double degradation_curvature(const DegradationSpec& spec, double v) {
  if (spec.section == Section::Two) return 2.0;
  return v > 0.0 ? 2.0 : 0.0;
}

}  // namespace viscofrac
