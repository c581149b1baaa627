#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <limits>
#include <optional>

#include "gavekit/matrix.hpp"

namespace gavekit {

enum class NormKind { One, Two, Inf };

inline const char* norm_name(NormKind p) {
  switch (p) {
    case NormKind::One: return "1";
    case NormKind::Two: return "2";
    default: return "inf";
  }
}

struct SvdResult {
  Matrix U;               // m x r, orthonormal columns
  Vector singular_values; // length r, descending, all > tolerance
  Matrix V;               // n x r, orthonormal columns
  double tolerance_used = 0.0;

  Index rank() const { return singular_values.size(); }
  double sigma_max() const { return rank() ? singular_values[0] : 0.0; }
};

namespace detail {

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline Matrix from_eigen(const Eigen::MatrixXd& e) {
  Matrix m(static_cast<Index>(e.rows()), static_cast<Index>(e.cols()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m.set(i, j, e(i, j));
  return m;
}

}  // namespace detail

// Truncated SVD at tolerance max(rows, cols) * eps * sigma_max (overridable).
// Jacobi rotations, fixed sweep order: bit-reproducible on a given platform.
inline SvdResult svd(const Matrix& m, std::optional<double> tol_override = std::nullopt) {
  const Eigen::MatrixXd e = detail::to_eigen(m);
  Eigen::JacobiSVD<Eigen::MatrixXd> dec(e, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) throw NumericalError("SVD did not converge");

  const Eigen::VectorXd& sv = dec.singularValues();
  const double sigma_max = sv.size() ? sv(0) : 0.0;
  const double tol = tol_override.value_or(
      static_cast<double>(std::max(m.rows(), m.cols())) *
      std::numeric_limits<double>::epsilon() * sigma_max);

  Index r = 0;
  while (r < static_cast<Index>(sv.size()) && sv(r) > tol) ++r;

  SvdResult out;
  out.tolerance_used = tol;
  out.U = detail::from_eigen(dec.matrixU().leftCols(r));
  out.V = detail::from_eigen(dec.matrixV().leftCols(r));
  std::vector<double> s(r);
  for (Index i = 0; i < r; ++i) s[i] = sv(i);
  out.singular_values = Vector(std::move(s));
  return out;
}

inline Index numerical_rank(const Matrix& m, std::optional<double> tol_override = std::nullopt) {
  return svd(m, tol_override).rank();
}

// Moore-Penrose inverse, V diag(1/sigma) U^T from the truncated SVD.
inline Matrix pinv(const Matrix& m, std::optional<double> tol_override = std::nullopt) {
  const SvdResult s = svd(m, tol_override);
  Matrix scaled_v(m.cols(), s.rank());
  for (Index i = 0; i < m.cols(); ++i)
    for (Index j = 0; j < s.rank(); ++j) scaled_v.set(i, j, s.V(i, j) / s.singular_values[j]);
  return scaled_v * s.U.transpose();
}

inline double op_norm(const Matrix& m, NormKind p) {
  switch (p) {
    case NormKind::One: {
      double best = 0.0;
      for (Index j = 0; j < m.cols(); ++j) best = std::max(best, m.col(j).one_norm());
      return best;
    }
    case NormKind::Inf: {
      double best = 0.0;
      for (Index i = 0; i < m.rows(); ++i) best = std::max(best, m.row(i).one_norm());
      return best;
    }
    case NormKind::Two:
    default:
      return svd(m).sigma_max();
  }
}

inline double vector_norm(const Vector& v, NormKind p) {
  switch (p) {
    case NormKind::One: return v.one_norm();
    case NormKind::Inf: return v.inf_norm();
    case NormKind::Two:
    default: return v.two_norm();
  }
}

inline Matrix submatrix(const Matrix& m, const IndexList& row_idx, const IndexList& col_idx) {
  auto check = [](const IndexList& idx, Index bound, const char* which) {
    std::vector<bool> seen(bound, false);
    for (Index i : idx) {
      if (i >= bound) throw InputError(ErrorCode::IndexError, std::string(which) + " index out of range");
      if (seen[i]) throw InputError(ErrorCode::IndexError, std::string(which) + " index duplicated");
      seen[i] = true;
    }
  };
  check(row_idx, m.rows(), "row");
  check(col_idx, m.cols(), "column");
  Matrix out(row_idx.size(), col_idx.size());
  for (Index i = 0; i < row_idx.size(); ++i)
    for (Index j = 0; j < col_idx.size(); ++j) out.set(i, j, m(row_idx[i], col_idx[j]));
  return out;
}

inline Matrix select_columns(const Matrix& m, const IndexList& col_idx) {
  IndexList rows(m.rows());
  for (Index i = 0; i < m.rows(); ++i) rows[i] = i;
  return submatrix(m, rows, col_idx);
}

// Dense square solve via the truncated SVD; rejects matrices that are
// singular at the rank tolerance rather than returning garbage.
inline Vector solve_square(const Matrix& m, const Vector& rhs) {
  if (m.rows() != m.cols()) throw InputError(ErrorCode::DimensionMismatch, "solve_square needs a square matrix");
  if (rhs.size() != m.rows()) throw InputError(ErrorCode::DimensionMismatch, "solve_square rhs length mismatch");
  const SvdResult s = svd(m);
  if (s.rank() < m.rows()) throw Error(ErrorCode::SingularMatrix, "matrix is singular to working tolerance");
  std::vector<double> x(m.cols(), 0.0);
  for (Index j = 0; j < s.rank(); ++j) {
    double coeff = 0.0;
    for (Index i = 0; i < m.rows(); ++i) coeff += s.U(i, j) * rhs[i];
    coeff /= s.singular_values[j];
    for (Index i = 0; i < m.cols(); ++i) x[i] += coeff * s.V(i, j);
  }
  return Vector(std::move(x));
}

}  // namespace gavekit
