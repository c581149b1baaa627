#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <vector>

#include "gavekit/error.hpp"

namespace gavekit {

using Index = std::size_t;
using IndexList = std::vector<Index>;

// Dense real vector. Entries are validated finite on construction; all
// arithmetic helpers build a fresh vector, so a Vector in hand is always
// finite.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::vector<double> entries) : v_(std::move(entries)) { validate(); }
  Vector(std::initializer_list<double> entries) : v_(entries) { validate(); }

  static Vector zeros(Index len) { return Vector(std::vector<double>(len, 0.0)); }

  Index size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  double operator[](Index i) const { return v_[i]; }
  const std::vector<double>& data() const { return v_; }

  double inf_norm() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }
  double one_norm() const {
    double s = 0.0;
    for (double x : v_) s += std::abs(x);
    return s;
  }
  double two_norm() const {
    double s = 0.0;
    for (double x : v_) s += x * x;
    return std::sqrt(s);
  }
  double min() const {
    double m = std::numeric_limits<double>::infinity();
    for (double x : v_) m = std::min(m, x);
    return m;
  }
  double max() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v_) m = std::max(m, x);
    return m;
  }
  double dot(const Vector& o) const {
    require_same_size(o);
    double s = 0.0;
    for (Index i = 0; i < size(); ++i) s += v_[i] * o.v_[i];
    return s;
  }
  Vector abs() const {
    std::vector<double> r(v_);
    for (double& x : r) x = std::abs(x);
    return Vector(std::move(r));
  }
  Vector operator+(const Vector& o) const {
    require_same_size(o);
    std::vector<double> r(size());
    for (Index i = 0; i < size(); ++i) r[i] = v_[i] + o.v_[i];
    return Vector(std::move(r));
  }
  Vector operator-(const Vector& o) const {
    require_same_size(o);
    std::vector<double> r(size());
    for (Index i = 0; i < size(); ++i) r[i] = v_[i] - o.v_[i];
    return Vector(std::move(r));
  }
  Vector operator-() const { return scaled(-1.0); }
  Vector scaled(double c) const {
    std::vector<double> r(v_);
    for (double& x : r) x *= c;
    return Vector(std::move(r));
  }

 private:
  void validate() const {
    for (double x : v_)
      if (!std::isfinite(x)) throw InputError(ErrorCode::NonFinite, "vector entry is not finite");
  }
  void require_same_size(const Vector& o) const {
    if (o.size() != size()) throw InputError(ErrorCode::DimensionMismatch, "vector length mismatch");
  }

  std::vector<double> v_;
};

// Dense real matrix, row-major. Finite entries enforced on construction.
// Zero-sized dimensions are allowed (truncated-SVD factors can be empty);
// problem-level types impose their own positivity requirements.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(Index rows, Index cols) : rows_(rows), cols_(cols), d_(rows * cols, 0.0) {}
  Matrix(Index rows, Index cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), d_(std::move(entries)) {
    if (d_.size() != rows_ * cols_)
      throw InputError(ErrorCode::DimensionMismatch, "matrix entry count does not match dimensions");
    for (double x : d_)
      if (!std::isfinite(x)) throw InputError(ErrorCode::NonFinite, "matrix entry is not finite");
  }
  Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    d_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw InputError(ErrorCode::RaggedRows, "ragged matrix initializer");
      for (double x : r) {
        if (!std::isfinite(x)) throw InputError(ErrorCode::NonFinite, "matrix entry is not finite");
        d_.push_back(x);
      }
    }
  }

  static Matrix identity(Index n) {
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  double operator()(Index i, Index j) const { return d_[i * cols_ + j]; }
  void set(Index i, Index j, double x) {
    if (!std::isfinite(x)) throw NumericalError("attempt to store non-finite matrix entry");
    d_[i * cols_ + j] = x;
  }
  const std::vector<double>& data() const { return d_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (Index i = 0; i < rows_; ++i)
      for (Index j = 0; j < cols_; ++j) t.set(j, i, (*this)(i, j));
    return t;
  }
  Matrix operator+(const Matrix& o) const { return combined(o, +1.0); }
  Matrix operator-(const Matrix& o) const { return combined(o, -1.0); }
  Matrix scaled(double c) const {
    std::vector<double> r(d_);
    for (double& x : r) x *= c;
    return Matrix(rows_, cols_, std::move(r));
  }
  Matrix abs() const {
    std::vector<double> r(d_);
    for (double& x : r) x = std::abs(x);
    return Matrix(rows_, cols_, std::move(r));
  }

  Vector operator*(const Vector& x) const {
    if (x.size() != cols_) throw InputError(ErrorCode::DimensionMismatch, "matrix-vector size mismatch");
    std::vector<double> r(rows_, 0.0);
    for (Index i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (Index j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
      r[i] = s;
    }
    return Vector(std::move(r));
  }
  Matrix operator*(const Matrix& o) const {
    if (o.rows_ != cols_) throw InputError(ErrorCode::DimensionMismatch, "matrix-matrix size mismatch");
    Matrix r(rows_, o.cols_);
    for (Index i = 0; i < rows_; ++i)
      for (Index k = 0; k < cols_; ++k) {
        const double a = (*this)(i, k);
        if (a == 0.0) continue;
        for (Index j = 0; j < o.cols_; ++j) r.set(i, j, r(i, j) + a * o(k, j));
      }
    return r;
  }

  Vector row(Index i) const {
    std::vector<double> r(cols_);
    for (Index j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return Vector(std::move(r));
  }
  Vector col(Index j) const {
    std::vector<double> r(rows_);
    for (Index i = 0; i < rows_; ++i) r[i] = (*this)(i, j);
    return Vector(std::move(r));
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double x : d_) s += x * x;
    return std::sqrt(s);
  }
  double max_abs() const {
    double m = 0.0;
    for (double x : d_) m = std::max(m, std::abs(x));
    return m;
  }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

 private:
  Matrix combined(const Matrix& o, double sign) const {
    if (!same_shape(o)) throw InputError(ErrorCode::DimensionMismatch, "matrix shape mismatch");
    std::vector<double> r(d_.size());
    for (Index i = 0; i < d_.size(); ++i) r[i] = d_[i] + sign * o.d_[i];
    return Matrix(rows_, cols_, std::move(r));
  }

  Index rows_, cols_;
  std::vector<double> d_;
};

inline Matrix diag_matrix(const Vector& d) {
  Matrix m(d.size(), d.size());
  for (Index i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
  return m;
}

}  // namespace gavekit
