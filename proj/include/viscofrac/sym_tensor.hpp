#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include <Eigen/Dense>

namespace viscofrac {

/// Symmetric d x d tensor (d <= 3) stored as its packed upper triangle,
/// row by row: d=2 -> (00, 01, 11), d=3 -> (00, 01, 02, 11, 12, 22).
class SymTensor {
 public:
  SymTensor() = default;
  explicit SymTensor(int dim);

  static SymTensor identity(int dim);
  /// Symmetric part of a square matrix.
  static SymTensor from_matrix(const Eigen::MatrixXd& m);
  /// Mandel coordinates: diagonal entries, then sqrt(2) * off-diagonals, in
  /// packed order. Frobenius products are preserved.
  static SymTensor from_mandel(int dim, const Eigen::VectorXd& v);

  int dim() const { return dim_; }
  int packed_size() const { return dim_ * (dim_ + 1) / 2; }

  double operator()(int i, int j) const { return c_[slot(i, j)]; }
  void set(int i, int j, double value) { c_[slot(i, j)] = value; }

  double packed(int k) const { return c_[k]; }
  double& packed(int k) { return c_[k]; }

  /// Frobenius norm sqrt(T:T).
  double norm() const;
  double norm_squared() const;
  bool is_finite() const;

  Eigen::MatrixXd to_matrix() const;
  Eigen::VectorXd to_mandel() const;

  SymTensor& operator+=(const SymTensor& o);
  SymTensor& operator-=(const SymTensor& o);
  SymTensor& operator*=(double s);

  /// True for an off-diagonal packed slot.
  bool off_diagonal(int k) const;

 private:
  int slot(int i, int j) const;

  int dim_ = 0;
  std::array<double, 6> c_{};
};

SymTensor operator+(SymTensor a, const SymTensor& b);
SymTensor operator-(SymTensor a, const SymTensor& b);
SymTensor operator*(double s, SymTensor a);
SymTensor operator*(SymTensor a, double s);

/// Double contraction A:B.
double ddot(const SymTensor& a, const SymTensor& b);

/// Fourth-order tensor on the full d x d index space, A(i,j,k,l).
class FourthOrderTensor {
 public:
  FourthOrderTensor() = default;
  explicit FourthOrderTensor(int dim) : dim_(dim) {}

  static FourthOrderTensor identity(int dim);  // delta_ik delta_jl

  int dim() const { return dim_; }
  double operator()(int i, int j, int k, int l) const { return c_[index(i, j, k, l)]; }
  double& operator()(int i, int j, int k, int l) { return c_[index(i, j, k, l)]; }

  double max_abs() const;
  /// max |A_ijkl - A_klij|
  double major_asymmetry() const;

  /// Restriction to symmetric tensors in Mandel coordinates,
  /// M_ab = E_a : A : E_b with E_a the orthonormal symmetric basis.
  Eigen::MatrixXd to_mandel() const;

 private:
  std::size_t index(int i, int j, int k, int l) const {
    return static_cast<std::size_t>(((i * 3 + j) * 3 + k) * 3 + l);
  }

  int dim_ = 0;
  std::array<double, 81> c_{};
};

}  // namespace viscofrac
