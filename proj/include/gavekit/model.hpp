#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gavekit/config.hpp"
#include "gavekit/linalg.hpp"
#include "gavekit/matrix.hpp"

namespace gavekit {

// Entrywise sign prescription in {-1, 0, +1}^n.
class SignPattern {
 public:
  SignPattern() = default;
  explicit SignPattern(std::vector<int> entries) : s_(std::move(entries)) {
    for (int v : s_)
      if (v < -1 || v > 1) throw InputError(ErrorCode::BadField, "sign pattern entry outside {-1,0,+1}");
  }

  static SignPattern all_ones(Index n) { return SignPattern(std::vector<int>(n, 1)); }
  static SignPattern all_zeros(Index n) { return SignPattern(std::vector<int>(n, 0)); }

  Index size() const { return s_.size(); }
  int operator[](Index i) const { return s_[i]; }
  const std::vector<int>& entries() const { return s_; }

  IndexList support() const {
    IndexList idx;
    for (Index i = 0; i < s_.size(); ++i)
      if (s_[i] != 0) idx.push_back(i);
    return idx;
  }
  bool full_sign() const {
    for (int v : s_)
      if (v == 0) return false;
    return true;
  }
  bool operator==(const SignPattern& o) const { return s_ == o.s_; }

 private:
  std::vector<int> s_;
};

// Zero detection is relative: |x_i| <= zero_pattern_rel * (1 + |x|_inf).
inline SignPattern sign_of(const Vector& x, const Tolerances& tol = {}) {
  const double cutoff = tol.zero_pattern_rel * (1.0 + x.inf_norm());
  std::vector<int> s(x.size());
  for (Index i = 0; i < x.size(); ++i)
    s[i] = std::abs(x[i]) <= cutoff ? 0 : (x[i] > 0 ? 1 : -1);
  return SignPattern(std::move(s));
}

// Problem data for A x - B |x| = b. Square systems are accepted,
// overdetermined ones are rejected up front.
struct GaveInstance {
  Matrix A;
  Matrix B;
  Vector b;

  GaveInstance(Matrix a, Matrix bb, Vector rhs) : A(std::move(a)), B(std::move(bb)), b(std::move(rhs)) {
    if (A.rows() == 0 || A.cols() == 0)
      throw InputError(ErrorCode::DimensionMismatch, "field A: dimensions must be at least 1x1");
    if (!A.same_shape(B))
      throw InputError(ErrorCode::DimensionMismatch, "field B: shape differs from A");
    if (b.size() != A.rows())
      throw InputError(ErrorCode::DimensionMismatch, "field b: length differs from row count m");
    if (A.rows() > A.cols())
      throw InputError(ErrorCode::DimensionMismatch, "field A: overdetermined system (m > n) rejected");
  }

  Index m() const { return A.rows(); }
  Index n() const { return A.cols(); }
};

inline Vector residual(const GaveInstance& inst, const Vector& x) {
  if (x.size() != inst.n()) throw InputError(ErrorCode::DimensionMismatch, "solution length differs from n");
  return inst.A * x - inst.B * x.abs() - inst.b;
}

inline bool residual_ok(const GaveInstance& inst, const Vector& x, const Tolerances& tol = {}) {
  return residual(inst, x).inf_norm() <= tol.residual_tol * (1.0 + inst.b.inf_norm());
}

// C = A diag(s) - B. If y >= 0 solves C y = b with the right support,
// x = diag(s) y solves the GAVE.
inline Matrix sign_transform(const GaveInstance& inst, const SignPattern& s) {
  if (s.size() != inst.n()) throw InputError(ErrorCode::DimensionMismatch, "sign pattern length differs from n");
  Matrix c(inst.m(), inst.n());
  for (Index i = 0; i < inst.m(); ++i)
    for (Index j = 0; j < inst.n(); ++j)
      c.set(i, j, inst.A(i, j) * static_cast<double>(s[j]) - inst.B(i, j));
  return c;
}

inline Vector apply_pattern(const SignPattern& s, const Vector& y) {
  std::vector<double> x(y.size());
  for (Index i = 0; i < y.size(); ++i) x[i] = static_cast<double>(s[i]) * y[i];
  return Vector(std::move(x));
}

enum class SplitTarget { OnA, OnB };

// M - N decomposition of A or B with the pseudoinverse of M cached.
struct Splitting {
  SplitTarget target = SplitTarget::OnA;
  Matrix M;
  Matrix N;
  Matrix M_pinv;
  Index M_rank = 0;
  bool trivial = false;  // M equals the split matrix, N = 0

  static Splitting make(const GaveInstance& inst, SplitTarget target, Matrix m_part) {
    const Matrix& whole = target == SplitTarget::OnA ? inst.A : inst.B;
    if (!m_part.same_shape(whole))
      throw InputError(ErrorCode::DimensionMismatch, "splitting M: shape differs from target matrix");
    Splitting s;
    s.target = target;
    s.N = m_part - whole;
    s.trivial = s.N.max_abs() <= 1e-12;
    s.M = std::move(m_part);
    s.M_pinv = pinv(s.M);
    s.M_rank = numerical_rank(s.M);
    return s;
  }

  static Splitting trivial_on(const GaveInstance& inst, SplitTarget target) {
    return make(inst, target, target == SplitTarget::OnA ? inst.A : inst.B);
  }
};

// Check a user-supplied (M, N) pair actually splits the target matrix.
inline void validate_splitting_pair(const GaveInstance& inst, SplitTarget target, const Matrix& m_part,
                                    const Matrix& n_part) {
  const Matrix& whole = target == SplitTarget::OnA ? inst.A : inst.B;
  if (!m_part.same_shape(whole) || !n_part.same_shape(whole))
    throw InputError(ErrorCode::DimensionMismatch, "splitting M/N: shape differs from target matrix");
  if ((m_part - n_part - whole).max_abs() > 1e-12)
    throw InputError(ErrorCode::BadField, "splitting M - N does not reproduce the target matrix");
}

enum class Multiplicity { Unknown, UniqueInPattern, InfiniteInPattern };

inline const char* multiplicity_name(Multiplicity m) {
  switch (m) {
    case Multiplicity::UniqueInPattern: return "unique_in_pattern";
    case Multiplicity::InfiniteInPattern: return "infinite_in_pattern";
    default: return "unknown";
  }
}

// A solution with its recomputed residual and derived sign pattern.
struct SolutionRecord {
  Vector x;
  double residual_inf = 0.0;
  SignPattern pattern;
  Multiplicity multiplicity = Multiplicity::Unknown;

  SolutionRecord() = default;
  SolutionRecord(const GaveInstance& inst, Vector solution, Multiplicity mult = Multiplicity::Unknown,
                 const Tolerances& tol = {})
      : x(std::move(solution)), multiplicity(mult) {
    residual_inf = residual(inst, x).inf_norm();
    pattern = sign_of(x, tol);
  }
};

}  // namespace gavekit
