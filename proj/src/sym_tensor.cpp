#include "viscofrac/sym_tensor.hpp"

#include <algorithm>
#include <stdexcept>

namespace viscofrac {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

// Packed slot -> (row, col) for each dimension.
constexpr std::array<std::array<int, 2>, 6> kSlots3{{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};
constexpr std::array<std::array<int, 2>, 3> kSlots2{{{0, 0}, {0, 1}, {1, 1}}};

std::array<int, 2> slot_pair(int dim, int k) {
  if (dim == 1) return {0, 0};
  if (dim == 2) return kSlots2[k];
  return kSlots3[k];
}

}  // namespace

SymTensor::SymTensor(int dim) : dim_(dim) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("SymTensor dimension must be 1, 2 or 3");
}

SymTensor SymTensor::identity(int dim) {
  SymTensor t(dim);
  for (int i = 0; i < dim; ++i) t.set(i, i, 1.0);
  return t;
}

SymTensor SymTensor::from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymTensor::from_matrix: matrix not square");
  SymTensor t(static_cast<int>(m.rows()));
  for (int i = 0; i < t.dim_; ++i)
    for (int j = i; j < t.dim_; ++j) t.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return t;
}

SymTensor SymTensor::from_mandel(int dim, const Eigen::VectorXd& v) {
  SymTensor t(dim);
  for (int k = 0; k < t.packed_size(); ++k)
    t.c_[k] = t.off_diagonal(k) ? v[k] / kSqrt2 : v[k];
  return t;
}

int SymTensor::slot(int i, int j) const {
  if (i > j) std::swap(i, j);
  switch (dim_) {
    case 1: return 0;
    case 2: return i + j;
    default: return i == 0 ? j : (i == 1 ? 2 + j : 5);
  }
}

bool SymTensor::off_diagonal(int k) const {
  const auto [i, j] = slot_pair(dim_, k);
  return i != j;
}

double SymTensor::norm_squared() const {
  double s = 0.0;
  for (int k = 0; k < packed_size(); ++k) s += (off_diagonal(k) ? 2.0 : 1.0) * c_[k] * c_[k];
  return s;
}

double SymTensor::norm() const { return std::sqrt(norm_squared()); }

bool SymTensor::is_finite() const {
  for (int k = 0; k < packed_size(); ++k)
    if (!std::isfinite(c_[k])) return false;
  return true;
}

Eigen::MatrixXd SymTensor::to_matrix() const {
  Eigen::MatrixXd m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

Eigen::VectorXd SymTensor::to_mandel() const {
  Eigen::VectorXd v(packed_size());
  for (int k = 0; k < packed_size(); ++k) v[k] = off_diagonal(k) ? kSqrt2 * c_[k] : c_[k];
  return v;
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
  for (int k = 0; k < packed_size(); ++k) c_[k] += o.c_[k];
  return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& o) {
  for (int k = 0; k < packed_size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

SymTensor& SymTensor::operator*=(double s) {
  for (int k = 0; k < packed_size(); ++k) c_[k] *= s;
  return *this;
}

SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
SymTensor operator*(double s, SymTensor a) { return a *= s; }
SymTensor operator*(SymTensor a, double s) { return a *= s; }

double ddot(const SymTensor& a, const SymTensor& b) {
  double s = 0.0;
  for (int k = 0; k < a.packed_size(); ++k) s += (a.off_diagonal(k) ? 2.0 : 1.0) * a.packed(k) * b.packed(k);
  return s;
}

FourthOrderTensor FourthOrderTensor::identity(int dim) {
  FourthOrderTensor a(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j, i, j) = 1.0;
  return a;
}

double FourthOrderTensor::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

double FourthOrderTensor::major_asymmetry() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        for (int l = 0; l < dim_; ++l) m = std::max(m, std::abs((*this)(i, j, k, l) - (*this)(k, l, i, j)));
  return m;
}

Eigen::MatrixXd FourthOrderTensor::to_mandel() const {
  const int m = dim_ * (dim_ + 1) / 2;
  // Basis E_a: e_i (x) e_i for diagonal slots, (e_i (x) e_j + e_j (x) e_i)/sqrt(2) otherwise.
  auto basis = [&](int a, int i, int j) {
    const auto [p, q] = slot_pair(dim_, a);
    if (p == q) return (i == p && j == q) ? 1.0 : 0.0;
    return ((i == p && j == q) || (i == q && j == p)) ? 1.0 / kSqrt2 : 0.0;
  };
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
          const double ea = basis(a, i, j);
          if (ea == 0.0) continue;
          for (int k = 0; k < dim_; ++k)
            for (int l = 0; l < dim_; ++l) {
              const double eb = basis(b, k, l);
              if (eb != 0.0) s += ea * (*this)(i, j, k, l) * eb;
            }
        }
      out(a, b) = s;
    }
  return out;
}

}  // namespace viscofrac
