#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "gavekit/feasibility.hpp"
#include "gavekit/json_io.hpp"
#include "gavekit/model.hpp"

namespace gavekit {

// Identifiers for the sufficient conditions the analyzer evaluates.
// Declaration order is the report sort order.
enum class TheoremId {
  ThmMpq,
  CorMp,
  ThmInfo,
  ThmInf2_2,
  ThmGaveInf,
  CorGaveInf,
  ThmZn1a,
  ThmZn1b,
  CorZn,
  ThmNonective,
  CorNonective,
  ThmSoaA,
  ThmSoaB,
  ThmNonectiveA,
  CorNonectiveAa,
  RemTmp,
  TrivialUnique,
};

enum class Conclusion {
  NoInfo,
  ExistsAnyB,
  InfiniteAnyB,
  ExistsForThisB,
  InfiniteInPattern,
  UniqueInPattern,
  NonnegExists,
  AllNonnegSolve,
  AllNonposSolve,
  OnlyTrivial,
};

inline const char* theorem_name(TheoremId id) {
  switch (id) {
    case TheoremId::ThmMpq: return "ThmMpq";
    case TheoremId::CorMp: return "CorMp";
    case TheoremId::ThmInfo: return "ThmInfo";
    case TheoremId::ThmInf2_2: return "ThmInf2_2";
    case TheoremId::ThmGaveInf: return "ThmGaveInf";
    case TheoremId::CorGaveInf: return "CorGaveInf";
    case TheoremId::ThmZn1a: return "ThmZn1a";
    case TheoremId::ThmZn1b: return "ThmZn1b";
    case TheoremId::CorZn: return "CorZn";
    case TheoremId::ThmNonective: return "ThmNonective";
    case TheoremId::CorNonective: return "CorNonective";
    case TheoremId::ThmSoaA: return "ThmSoaA";
    case TheoremId::ThmSoaB: return "ThmSoaB";
    case TheoremId::ThmNonectiveA: return "ThmNonectiveA";
    case TheoremId::CorNonectiveAa: return "CorNonectiveAa";
    case TheoremId::RemTmp: return "RemTmp";
    default: return "TrivialUnique";
  }
}

inline const char* theorem_description(TheoremId id) {
  switch (id) {
    case TheoremId::ThmMpq: return "contraction on an A-splitting: unique fixed point solves the system for every b";
    case TheoremId::CorMp: return "contraction with the trivial A-splitting";
    case TheoremId::ThmInfo: return "nonsingular column block with contractive companion block: infinitely many solutions for every b";
    case TheoremId::ThmInf2_2: return "submatrix classification at a known solution";
    case TheoremId::ThmGaveInf: return "known solution with more nonzeros than the transform rank";
    case TheoremId::CorGaveInf: return "known solution with more than m nonzeros";
    case TheoremId::ThmZn1a: return "B-splitting sign-cone condition: nonnegative y-solution exists for this b";
    case TheoremId::ThmZn1b: return "strict B-splitting sign-cone condition: infinitely many solutions with the pattern";
    case TheoremId::CorZn: return "trivial B-splitting strict condition: infinitely many solutions for every full sign pattern";
    case TheoremId::ThmNonective: return "B-splitting all-ones sign cone: a nonnegative solution exists";
    case TheoremId::CorNonective: return "trivial B-splitting all-ones sign cone: a nonnegative solution exists";
    case TheoremId::ThmSoaA: return "A-splitting sign-cone condition: solution with the pattern's cone for this b";
    case TheoremId::ThmSoaB: return "strict A-splitting sign-cone condition: infinitely many solutions with the pattern";
    case TheoremId::ThmNonectiveA: return "A-splitting all-ones sign cone: a nonnegative solution exists";
    case TheoremId::CorNonectiveAa: return "trivial A-splitting all-ones sign cone: a nonnegative solution exists";
    case TheoremId::RemTmp: return "A = +-B with one-signed rows and b = 0: a full orthant of solutions";
    default: return "|A| dominated by B (or B < A <= 0) with b = 0: only the trivial solution";
  }
}

inline const char* conclusion_name(Conclusion c) {
  switch (c) {
    case Conclusion::NoInfo: return "no_info";
    case Conclusion::ExistsAnyB: return "exists_any_b";
    case Conclusion::InfiniteAnyB: return "infinite_any_b";
    case Conclusion::ExistsForThisB: return "exists_for_this_b";
    case Conclusion::InfiniteInPattern: return "infinite_in_pattern";
    case Conclusion::UniqueInPattern: return "unique_in_pattern";
    case Conclusion::NonnegExists: return "nonneg_exists";
    case Conclusion::AllNonnegSolve: return "all_nonneg_solve";
    case Conclusion::AllNonposSolve: return "all_nonpos_solve";
    default: return "only_trivial";
  }
}

struct TheoremVerdict {
  TheoremId id = TheoremId::ThmMpq;
  bool applies = false;
  Conclusion conclusion = Conclusion::NoInfo;
  nlohmann::json witness = nlohmann::json::object();
  int splitting_index = -1;  // report ordering key; -1 when no splitting involved
  int p_index = -1;          // 0,1,2 for p = 1,2,inf; -1 when norm-free
};

namespace detail {

inline TheoremVerdict not_applicable(TheoremId id, const std::string& reason, int split_idx = -1,
                                     int p_idx = -1) {
  TheoremVerdict v;
  v.id = id;
  v.applies = false;
  v.conclusion = Conclusion::NoInfo;
  v.witness["reason"] = reason;
  v.splitting_index = split_idx;
  v.p_index = p_idx;
  return v;
}

inline int p_order(NormKind p) {
  return p == NormKind::One ? 0 : (p == NormKind::Two ? 1 : 2);
}

inline nlohmann::json index_list_json(const IndexList& idx) {
  nlohmann::json arr = nlohmann::json::array();
  for (Index i : idx) arr.push_back(i + 1);  // reports use 1-based indices
  return arr;
}

inline bool all_leq(const Vector& v, double bound) {
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] > bound) return false;
  return true;
}
inline bool all_lt(const Vector& v, double bound) {
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] >= bound) return false;
  return true;
}
inline bool matrix_geq(const Matrix& m, double bound) {
  for (double x : m.data())
    if (x < bound) return false;
  return true;
}

// gamma = min |v_i| / max |v_i|; only meaningful when v has no zero entry.
inline std::optional<double> gamma_of(const Vector& v) {
  if (v.empty()) return std::nullopt;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    lo = std::min(lo, std::abs(v[i]));
    hi = std::max(hi, std::abs(v[i]));
  }
  if (hi == 0.0 || lo == 0.0) return std::nullopt;
  return lo / hi;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// b-independent checkers

// Contraction condition on an A-splitting: rank(M) = m and
// |M^+ N|_p + |M^+ B|_p < 1 gives a unique fixed point that solves the
// system for every right-hand side.
inline TheoremVerdict check_contraction_A(const GaveInstance& inst, const Splitting& split, NormKind p,
                                          const Tolerances& tol = {}, int split_idx = -1) {
  if (split.target != SplitTarget::OnA)
    throw InputError(ErrorCode::BadField, "check_contraction_A needs an A-splitting");
  const TheoremId id = split.trivial ? TheoremId::CorMp : TheoremId::ThmMpq;
  const int pi = detail::p_order(p);
  if (inst.m() >= inst.n()) return detail::not_applicable(id, "requires m < n", split_idx, pi);
  if (split.M_rank < inst.m())
    return detail::not_applicable(id, "rank(M) < m", split_idx, pi);

  const double qn = op_norm(split.M_pinv * split.N, p);
  const double qb = op_norm(split.M_pinv * inst.B, p);
  TheoremVerdict v;
  v.id = id;
  v.splitting_index = split_idx;
  v.p_index = pi;
  v.witness["p"] = norm_name(p);
  v.witness["norm_MpinvN"] = qn;
  v.witness["norm_MpinvB"] = qb;
  v.witness["contraction_factor"] = qn + qb;
  if (tol.strictly_less_than_one(qn + qb)) {
    v.applies = true;
    v.conclusion = Conclusion::ExistsAnyB;
  } else {
    v.applies = false;
    v.witness["reason"] = "norm sum not below one";
  }
  return v;
}

struct SearchBudget {
  std::size_t max_subsets = 10000;
};

// Searches for m columns J with A(:,J) nonsingular and |A(:,J)^{-1} B(:,J)|_p < 1.
// Pivoted-QR column order first, then lexicographic exhaustion within budget.
inline TheoremVerdict check_submatrix_condition(const GaveInstance& inst, NormKind p,
                                                const SearchBudget& budget = {}, const Tolerances& tol = {}) {
  const int pi = detail::p_order(p);
  const Index m = inst.m(), n = inst.n();
  if (m >= n) return detail::not_applicable(TheoremId::ThmInfo, "requires m < n", -1, pi);
  if (numerical_rank(inst.A) < m)
    return detail::not_applicable(TheoremId::ThmInfo, "rank(A) < m", -1, pi);

  std::size_t tested = 0;
  bool exhausted_all = false;

  auto try_subset = [&](const IndexList& cols) -> std::optional<double> {
    ++tested;
    const Matrix a1 = select_columns(inst.A, cols);
    if (numerical_rank(a1) < m) return std::nullopt;
    const Matrix b1 = select_columns(inst.B, cols);
    Matrix a1inv_b1(m, m);
    for (Index j = 0; j < m; ++j) {
      const Vector col = solve_square(a1, b1.col(j));
      for (Index i = 0; i < m; ++i) a1inv_b1.set(i, j, col[i]);
    }
    const double norm = op_norm(a1inv_b1, p);
    if (tol.strictly_less_than_one(norm)) return norm;
    return std::nullopt;
  };

  auto success = [&](const IndexList& cols, double norm) {
    TheoremVerdict v;
    v.id = TheoremId::ThmInfo;
    v.applies = true;
    v.conclusion = Conclusion::InfiniteAnyB;
    v.p_index = pi;
    v.witness["p"] = norm_name(p);
    v.witness["columns"] = detail::index_list_json(cols);
    v.witness["norm"] = norm;
    v.witness["subsets_tested"] = tested;
    return v;
  };

  // heuristic: rank-revealing pivot columns of A
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(detail::to_eigen(inst.A));
    const auto& perm = qr.colsPermutation().indices();
    IndexList cols(m);
    for (Index i = 0; i < m; ++i) cols[i] = static_cast<Index>(perm(static_cast<Eigen::Index>(i)));
    std::sort(cols.begin(), cols.end());
    if (auto norm = try_subset(cols)) return success(cols, *norm);
  }

  // lexicographic exhaustion over all m-subsets
  IndexList cols(m);
  for (Index i = 0; i < m; ++i) cols[i] = i;
  for (;;) {
    if (tested >= budget.max_subsets) break;
    if (auto norm = try_subset(cols)) return success(cols, *norm);
    // next combination
    Index i = m;
    while (i > 0) {
      --i;
      if (cols[i] < n - (m - i)) {
        ++cols[i];
        for (Index j = i + 1; j < m; ++j) cols[j] = cols[j - 1] + 1;
        break;
      }
      if (i == 0) {
        exhausted_all = true;
        break;
      }
    }
    if (exhausted_all) break;
  }

  TheoremVerdict v = detail::not_applicable(
      TheoremId::ThmInfo, exhausted_all ? "no qualifying column set" : "search budget exhausted", -1, pi);
  v.witness["subsets_tested"] = tested;
  v.witness["inconclusive"] = !exhausted_all;
  v.witness["refuted_at_p"] = exhausted_all;
  return v;
}

// ---------------------------------------------------------------------------
// Multiplicity classification at a known solution

enum class MultiplicityCase { InfiniteSamePattern, InfiniteOnSubpattern, UniqueInPattern };

struct MultiplicityClass {
  MultiplicityCase kind = MultiplicityCase::UniqueInPattern;
  IndexList I1;
  IndexList I2;
};

struct ClassifyResult {
  bool hypothesis_met = false;
  MultiplicityClass cls;        // valid when hypothesis_met
  bool subpattern_infinite = false;  // the I2-subpattern family always exists once classified
  SignPattern pattern;
  Index rank = 0;
  Index nonzeros = 0;
};

namespace detail {

// Find (I1, I2) with |I1| = |I2| = r, M(I1, I2) nonsingular and I2 inside
// the given support. Pivoted QR first; tiny exhaustive sweep as fallback.
inline std::optional<std::pair<IndexList, IndexList>> find_qualifying_submatrix(const Matrix& m,
                                                                                const IndexList& support,
                                                                                Index r) {
  if (r == 0) return std::make_pair(IndexList{}, IndexList{});
  if (support.size() < r) return std::nullopt;
  const Matrix restricted = select_columns(m, support);
  if (numerical_rank(restricted) < r) return std::nullopt;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> colqr(to_eigen(restricted));
  IndexList i2(r);
  for (Index j = 0; j < r; ++j)
    i2[j] = support[static_cast<Index>(colqr.colsPermutation().indices()(static_cast<Eigen::Index>(j)))];
  std::sort(i2.begin(), i2.end());

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rowqr(to_eigen(select_columns(m, i2).transpose()));
  IndexList i1(r);
  for (Index j = 0; j < r; ++j)
    i1[j] = static_cast<Index>(rowqr.colsPermutation().indices()(static_cast<Eigen::Index>(j)));
  std::sort(i1.begin(), i1.end());

  if (numerical_rank(submatrix(m, i1, i2)) == r) return std::make_pair(i1, i2);

  // exhaustive fallback (desk scale)
  std::vector<IndexList> col_subsets, row_subsets;
  auto combos = [&](Index universe, auto&& remap, std::vector<IndexList>& out) {
    IndexList c(r);
    for (Index i = 0; i < r; ++i) c[i] = i;
    for (;;) {
      IndexList mapped(r);
      for (Index i = 0; i < r; ++i) mapped[i] = remap(c[i]);
      out.push_back(mapped);
      Index i = r;
      bool done = false;
      while (i > 0) {
        --i;
        if (c[i] < universe - (r - i)) {
          ++c[i];
          for (Index j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
          break;
        }
        if (i == 0) done = true;
      }
      if (done) break;
    }
  };
  combos(support.size(), [&](Index i) { return support[i]; }, col_subsets);
  combos(m.rows(), [](Index i) { return i; }, row_subsets);
  for (const auto& cs : col_subsets)
    for (const auto& rs : row_subsets)
      if (numerical_rank(submatrix(m, rs, cs)) == r) return std::make_pair(rs, cs);
  return std::nullopt;
}

// Shared engine: classify the pattern-constrained solution set of a linear
// system M v = rhs around a known solution v. The caller guarantees v is a
// solution and that the system is underdetermined; support and sign data
// come from v itself.
inline ClassifyResult classify_linear_core(const Matrix& m, const Vector& v, const Tolerances& tol) {
  ClassifyResult out;
  out.pattern = sign_of(v, tol);
  const IndexList support = out.pattern.support();
  out.rank = numerical_rank(m);
  out.nonzeros = support.size();
  if (m.rows() >= m.cols()) return out;     // stated only for m < n
  if (out.nonzeros < out.rank) return out;  // too few nonzeros: hypothesis unmet

  auto found = find_qualifying_submatrix(m, support, out.rank);
  if (!found) return out;
  out.hypothesis_met = true;
  out.subpattern_infinite = true;
  out.cls.I1 = std::move(found->first);
  out.cls.I2 = std::move(found->second);
  out.cls.kind = out.nonzeros > out.rank ? MultiplicityCase::InfiniteSamePattern
                                         : MultiplicityCase::UniqueInPattern;
  return out;
}

}  // namespace detail

// Lemma-level engine for plain linear systems A x = b.
inline ClassifyResult classify_linear_solution(const Matrix& a, const Vector& b, const Vector& x_star,
                                               const Tolerances& tol = {}) {
  if ((a * x_star - b).inf_norm() > tol.residual_tol * (1.0 + b.inf_norm()))
    throw InputError(ErrorCode::BadField, "x_star is not a solution of the linear system");
  return detail::classify_linear_core(a, x_star, tol);
}

// Theorem-level classification through the sign transform C = A diag(s) - B.
inline ClassifyResult classify_known_solution(const GaveInstance& inst, const Vector& x_star,
                                              const Tolerances& tol = {}) {
  if (!residual_ok(inst, x_star, tol))
    throw InputError(ErrorCode::BadField, "x_star is not a solution of the instance");
  const SignPattern s = sign_of(x_star, tol);
  return detail::classify_linear_core(sign_transform(inst, s), x_star, tol);
}

inline TheoremVerdict classification_verdict(const ClassifyResult& r) {
  TheoremVerdict v;
  v.id = TheoremId::ThmInf2_2;
  v.witness["pattern"] = pattern_to_json(r.pattern);
  v.witness["rank"] = r.rank;
  v.witness["nonzeros"] = r.nonzeros;
  if (!r.hypothesis_met) {
    v.applies = false;
    v.witness["reason"] = "hypothesis unmet: no qualifying nonsingular submatrix inside the support";
    return v;
  }
  v.applies = true;
  v.conclusion = r.cls.kind == MultiplicityCase::UniqueInPattern ? Conclusion::UniqueInPattern
                                                                 : Conclusion::InfiniteInPattern;
  v.witness["I1"] = detail::index_list_json(r.cls.I1);
  v.witness["I2"] = detail::index_list_json(r.cls.I2);
  v.witness["subpattern_family"] = r.subpattern_infinite;
  return v;
}

// Known solution with more nonzeros than rank(A diag(s) - B): infinitely
// many solutions share its pattern, no submatrix condition needed.
inline TheoremVerdict check_nonzero_count(const GaveInstance& inst, const Vector& x_star,
                                          const Tolerances& tol = {}) {
  if (!residual_ok(inst, x_star, tol))
    throw InputError(ErrorCode::BadField, "x_star is not a solution of the instance");
  const SignPattern s = sign_of(x_star, tol);
  const Index r = numerical_rank(sign_transform(inst, s));
  const Index nnz = s.support().size();
  TheoremVerdict v;
  v.id = TheoremId::ThmGaveInf;
  v.witness["pattern"] = pattern_to_json(s);
  v.witness["rank"] = r;
  v.witness["nonzeros"] = nnz;
  if (inst.m() >= inst.n()) {
    v.witness["reason"] = "requires m < n";
  } else if (nnz > r) {
    v.applies = true;
    v.conclusion = Conclusion::InfiniteInPattern;
  } else {
    v.witness["reason"] = "nonzero count does not exceed the transform rank";
  }
  return v;
}

// ---------------------------------------------------------------------------
// Sign-cone checkers on splittings

// B-splitting conditions for a full sign pattern s. Emits the plain
// cone verdict at the requested p; the strict verdict (and its trivial-
// splitting corollary) is inf-norm-only and is emitted when p = inf.
inline std::vector<TheoremVerdict> check_signcone_B(const GaveInstance& inst, const Splitting& split,
                                                    const SignPattern& s, NormKind p,
                                                    const Tolerances& tol = {}, int split_idx = -1) {
  if (split.target != SplitTarget::OnB)
    throw InputError(ErrorCode::BadField, "check_signcone_B needs a B-splitting");
  if (s.size() != inst.n())
    throw InputError(ErrorCode::DimensionMismatch, "sign pattern length differs from n");

  const bool ones = s == SignPattern::all_ones(inst.n());
  const TheoremId id_a = ones ? (split.trivial ? TheoremId::CorNonective : TheoremId::ThmNonective)
                              : TheoremId::ThmZn1a;
  const int pi = detail::p_order(p);
  std::vector<TheoremVerdict> out;

  if (!s.full_sign()) {
    out.push_back(detail::not_applicable(id_a, "pattern has zero entries", split_idx, pi));
    return out;
  }
  if (inst.m() >= inst.n()) {
    out.push_back(detail::not_applicable(id_a, "requires m < n", split_idx, pi));
    if (p == NormKind::Inf)
      out.push_back(detail::not_applicable(TheoremId::ThmZn1b, "requires m < n", split_idx, 2));
    return out;
  }
  if (split.M_rank < inst.m()) {
    out.push_back(detail::not_applicable(id_a, "rank(M) < m", split_idx, pi));
    if (p == NormKind::Inf)
      out.push_back(detail::not_applicable(TheoremId::ThmZn1b, "rank(M) < m", split_idx, 2));
    return out;
  }

  Matrix a_diag_s(inst.m(), inst.n());
  for (Index i = 0; i < inst.m(); ++i)
    for (Index j = 0; j < inst.n(); ++j) a_diag_s.set(i, j, inst.A(i, j) * static_cast<double>(s[j]));
  const Matrix g = split.M_pinv * (split.N + a_diag_s);
  const Vector v = split.M_pinv * inst.b;

  const bool v_leq0 = detail::all_leq(v, tol.sign_tol);
  const bool v_lt0 = detail::all_lt(v, -tol.sign_tol);
  const bool g_geq0 = detail::matrix_geq(g, -tol.sign_tol);
  const double norm_p = op_norm(g, p);

  {
    TheoremVerdict va;
    va.id = id_a;
    va.splitting_index = split_idx;
    va.p_index = pi;
    va.witness["p"] = norm_name(p);
    va.witness["norm"] = norm_p;
    va.witness["Mpinv_b"] = detail::vector_to(v);
    if (!ones) va.witness["pattern"] = pattern_to_json(s);
    if (v_leq0 && g_geq0 && tol.strictly_less_than_one(norm_p)) {
      va.applies = true;
      va.conclusion = ones ? Conclusion::NonnegExists : Conclusion::ExistsForThisB;
    } else {
      va.witness["reason"] = !v_leq0        ? "M^+ b has a positive entry"
                             : !g_geq0      ? "M^+ (N + A diag(s)) has a negative entry"
                                            : "norm not below one";
    }
    out.push_back(std::move(va));
  }

  if (p == NormKind::Inf) {
    const double norm_inf = norm_p;
    const auto gamma = detail::gamma_of(v);
    TheoremVerdict vb;
    vb.id = TheoremId::ThmZn1b;
    vb.splitting_index = split_idx;
    vb.p_index = 2;
    vb.witness["pattern"] = pattern_to_json(s);
    vb.witness["norm_inf"] = norm_inf;
    if (v_lt0 && gamma) vb.witness["gamma"] = *gamma;
    if (v_lt0 && gamma && tol.strictly_less(norm_inf, *gamma / 2.0)) {
      vb.applies = true;
      vb.conclusion = Conclusion::InfiniteInPattern;
    } else {
      vb.witness["reason"] = v_lt0 ? "inf-norm not below gamma/2" : "M^+ b not strictly negative";
    }
    const bool strict_holds = vb.applies;
    out.push_back(std::move(vb));

    // trivial splitting: the strict condition is pattern-free, so it covers
    // every full sign pattern at once
    if (split.trivial) {
      TheoremVerdict vc;
      vc.id = TheoremId::CorZn;
      vc.splitting_index = split_idx;
      vc.p_index = 2;
      vc.witness["norm_inf"] = norm_inf;
      if (v_lt0 && gamma) vc.witness["gamma"] = *gamma;
      if (strict_holds) {
        vc.applies = true;
        vc.conclusion = Conclusion::InfiniteInPattern;
        vc.witness["every_full_sign_pattern"] = true;
      } else {
        vc.witness["reason"] = "strict trivial-splitting condition fails";
      }
      out.push_back(std::move(vc));
    }
  }
  return out;
}

// A-splitting mirror. The cone conditions read through diag(s) on the left.
inline std::vector<TheoremVerdict> check_signcone_A(const GaveInstance& inst, const Splitting& split,
                                                    const SignPattern& s, NormKind p,
                                                    const Tolerances& tol = {}, int split_idx = -1) {
  if (split.target != SplitTarget::OnA)
    throw InputError(ErrorCode::BadField, "check_signcone_A needs an A-splitting");
  if (s.size() != inst.n())
    throw InputError(ErrorCode::DimensionMismatch, "sign pattern length differs from n");

  const bool ones = s == SignPattern::all_ones(inst.n());
  const TheoremId id_a = ones ? (split.trivial ? TheoremId::CorNonectiveAa : TheoremId::ThmNonectiveA)
                              : TheoremId::ThmSoaA;
  const int pi = detail::p_order(p);
  std::vector<TheoremVerdict> out;

  if (!s.full_sign()) {
    out.push_back(detail::not_applicable(id_a, "pattern has zero entries", split_idx, pi));
    return out;
  }
  if (inst.m() >= inst.n()) {
    out.push_back(detail::not_applicable(id_a, "requires m < n", split_idx, pi));
    if (p == NormKind::Inf)
      out.push_back(detail::not_applicable(TheoremId::ThmSoaB, "requires m < n", split_idx, 2));
    return out;
  }
  if (split.M_rank < inst.m()) {
    out.push_back(detail::not_applicable(id_a, "rank(M) < m", split_idx, pi));
    if (p == NormKind::Inf)
      out.push_back(detail::not_applicable(TheoremId::ThmSoaB, "rank(M) < m", split_idx, 2));
    return out;
  }

  Matrix n_diag_s(inst.m(), inst.n());
  for (Index i = 0; i < inst.m(); ++i)
    for (Index j = 0; j < inst.n(); ++j) n_diag_s.set(i, j, split.N(i, j) * static_cast<double>(s[j]));
  const Matrix g = split.M_pinv * (n_diag_s + inst.B);
  const Vector v = split.M_pinv * inst.b;
  const Vector sv = apply_pattern(s, v);

  Matrix sg(g.rows(), g.cols());
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.cols(); ++j) sg.set(i, j, static_cast<double>(s[i]) * g(i, j));

  const bool sv_geq0 = detail::all_leq(-sv, tol.sign_tol);
  const bool sv_gt0 = detail::all_lt(-sv, -tol.sign_tol);
  const bool sg_geq0 = detail::matrix_geq(sg, -tol.sign_tol);
  const double norm_p = op_norm(g, p);

  {
    TheoremVerdict va;
    va.id = id_a;
    va.splitting_index = split_idx;
    va.p_index = pi;
    va.witness["p"] = norm_name(p);
    va.witness["norm"] = norm_p;
    va.witness["Mpinv_b"] = detail::vector_to(v);
    if (!ones) va.witness["pattern"] = pattern_to_json(s);
    if (sv_geq0 && sg_geq0 && tol.strictly_less_than_one(norm_p)) {
      va.applies = true;
      va.conclusion = ones ? Conclusion::NonnegExists : Conclusion::ExistsForThisB;
    } else {
      va.witness["reason"] = !sv_geq0       ? "diag(s) M^+ b has a negative entry"
                             : !sg_geq0     ? "diag(s) M^+ (N diag(s) + B) has a negative entry"
                                            : "norm not below one";
    }
    out.push_back(std::move(va));
  }

  if (p == NormKind::Inf) {
    const double norm_inf = norm_p;
    const auto gamma = detail::gamma_of(v);
    TheoremVerdict vb;
    vb.id = TheoremId::ThmSoaB;
    vb.splitting_index = split_idx;
    vb.p_index = 2;
    vb.witness["pattern"] = pattern_to_json(s);
    vb.witness["norm_inf"] = norm_inf;
    if (sv_gt0 && gamma) vb.witness["gamma"] = *gamma;
    if (sv_gt0 && gamma && tol.strictly_less(norm_inf, *gamma / 2.0)) {
      vb.applies = true;
      vb.conclusion = Conclusion::InfiniteInPattern;
    } else {
      vb.witness["reason"] = sv_gt0 ? "inf-norm not below gamma/2" : "diag(s) M^+ b not strictly positive";
    }
    out.push_back(std::move(vb));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structural checks at b = 0. These test given data, so comparisons are exact.

inline std::vector<TheoremVerdict> check_degenerate(const GaveInstance& inst) {
  bool b_zero = true;
  for (Index i = 0; i < inst.b.size(); ++i)
    if (inst.b[i] != 0.0) b_zero = false;

  auto rows_one_signed = [&](const Matrix& m) {
    for (Index i = 0; i < m.rows(); ++i) {
      bool pos = true, neg = true;
      for (Index j = 0; j < m.cols(); ++j) {
        pos = pos && m(i, j) > 0.0;
        neg = neg && m(i, j) < 0.0;
      }
      if (!pos && !neg) return false;
    }
    return true;
  };
  auto equals = [&](const Matrix& x, const Matrix& y) {
    for (Index i = 0; i < x.rows(); ++i)
      for (Index j = 0; j < x.cols(); ++j)
        if (x(i, j) != y(i, j)) return false;
    return true;
  };

  std::vector<TheoremVerdict> out;

  TheoremVerdict orthant;
  orthant.id = TheoremId::RemTmp;
  if (!b_zero) {
    orthant.witness["reason"] = "b is not zero";
  } else if (equals(inst.A, inst.B) && rows_one_signed(inst.A)) {
    orthant.applies = true;
    orthant.conclusion = Conclusion::AllNonnegSolve;
  } else if (equals(inst.A, inst.B.scaled(-1.0)) && rows_one_signed(inst.A)) {
    orthant.applies = true;
    orthant.conclusion = Conclusion::AllNonposSolve;
  } else {
    orthant.witness["reason"] = "A is not +-B with one-signed rows";
  }
  out.push_back(std::move(orthant));

  auto strictly_dominated = [&] {  // |A| < B entrywise
    for (Index i = 0; i < inst.A.rows(); ++i)
      for (Index j = 0; j < inst.A.cols(); ++j)
        if (!(std::abs(inst.A(i, j)) < inst.B(i, j))) return false;
    return true;
  };
  auto below_nonpos = [&] {  // B < A <= 0 entrywise
    for (Index i = 0; i < inst.A.rows(); ++i)
      for (Index j = 0; j < inst.A.cols(); ++j)
        if (!(inst.B(i, j) < inst.A(i, j) && inst.A(i, j) <= 0.0)) return false;
    return true;
  };

  TheoremVerdict trivial;
  trivial.id = TheoremId::TrivialUnique;
  if (!b_zero) {
    trivial.witness["reason"] = "b is not zero";
  } else if (strictly_dominated() || below_nonpos()) {
    trivial.applies = true;
    trivial.conclusion = Conclusion::OnlyTrivial;
  } else {
    trivial.witness["reason"] = "no strict dominance between |A| and B";
  }
  out.push_back(std::move(trivial));
  return out;
}

// ---------------------------------------------------------------------------
// Aggregation

struct AnalyzeOptions {
  std::vector<Splitting> user_splittings;
  bool auto_splittings = true;
  std::optional<SignPattern> pattern;    // extra pattern for the sign-cone checkers
  std::optional<Vector> known_solution;  // enables the known-solution checkers
  SearchBudget submatrix_budget;
  Tolerances tol;
};

struct AnalysisReport {
  std::vector<TheoremVerdict> verdicts;
  std::optional<std::size_t> strongest;
  std::string summary;
};

namespace detail {

inline int conclusion_strength(Conclusion c) {
  switch (c) {
    case Conclusion::InfiniteAnyB: return 9;
    case Conclusion::ExistsAnyB: return 8;
    case Conclusion::AllNonnegSolve: return 7;
    case Conclusion::AllNonposSolve: return 7;
    case Conclusion::InfiniteInPattern: return 6;
    case Conclusion::OnlyTrivial: return 5;
    case Conclusion::UniqueInPattern: return 4;
    case Conclusion::NonnegExists: return 3;
    case Conclusion::ExistsForThisB: return 2;
    default: return 0;
  }
}

// The diagonal shift: M = D with D(i,i) matched to the target's diagonal
// sign and sized past its row sum, zero elsewhere. Full row rank for m <= n.
inline Splitting diag_shift_splitting(const GaveInstance& inst, SplitTarget target) {
  const Matrix& whole = target == SplitTarget::OnA ? inst.A : inst.B;
  Matrix m(inst.m(), inst.n());
  for (Index i = 0; i < inst.m(); ++i) {
    const double row_sum = whole.row(i).one_norm();
    const double sign = whole(i, i) < 0 ? -1.0 : 1.0;
    m.set(i, i, sign * std::max(1.0, row_sum));
  }
  return Splitting::make(inst, target, std::move(m));
}

}  // namespace detail

// Runs every checker over the splitting family and p in {1, 2, inf}.
// Output order is deterministic: (theorem, splitting index, p).
inline AnalysisReport analyze(const GaveInstance& inst, const AnalyzeOptions& opt = {}) {
  const Tolerances& tol = opt.tol;
  std::vector<Splitting> on_a{Splitting::trivial_on(inst, SplitTarget::OnA)};
  std::vector<Splitting> on_b{Splitting::trivial_on(inst, SplitTarget::OnB)};
  if (opt.auto_splittings) {
    on_a.push_back(detail::diag_shift_splitting(inst, SplitTarget::OnA));
    on_b.push_back(detail::diag_shift_splitting(inst, SplitTarget::OnB));
  }
  for (const Splitting& s : opt.user_splittings)
    (s.target == SplitTarget::OnA ? on_a : on_b).push_back(s);

  std::vector<SignPattern> patterns{SignPattern::all_ones(inst.n())};
  if (opt.pattern && !(*opt.pattern == patterns[0])) patterns.push_back(*opt.pattern);

  const NormKind ps[3] = {NormKind::One, NormKind::Two, NormKind::Inf};
  AnalysisReport report;

  for (int si = 0; si < static_cast<int>(on_a.size()); ++si)
    for (NormKind p : ps) {
      report.verdicts.push_back(check_contraction_A(inst, on_a[si], p, tol, si));
      for (const SignPattern& s : patterns)
        for (TheoremVerdict& v : check_signcone_A(inst, on_a[si], s, p, tol, si))
          report.verdicts.push_back(std::move(v));
    }
  for (int si = 0; si < static_cast<int>(on_b.size()); ++si)
    for (NormKind p : ps)
      for (const SignPattern& s : patterns)
        for (TheoremVerdict& v : check_signcone_B(inst, on_b[si], s, p, tol, si))
          report.verdicts.push_back(std::move(v));
  for (NormKind p : ps) report.verdicts.push_back(check_submatrix_condition(inst, p, opt.submatrix_budget, tol));
  for (TheoremVerdict& v : check_degenerate(inst)) report.verdicts.push_back(std::move(v));

  if (opt.known_solution) {
    report.verdicts.push_back(classification_verdict(classify_known_solution(inst, *opt.known_solution, tol)));
    TheoremVerdict gi = check_nonzero_count(inst, *opt.known_solution, tol);
    TheoremVerdict cor;
    cor.id = TheoremId::CorGaveInf;
    cor.witness = gi.witness;
    const Index nnz = gi.witness["nonzeros"].get<Index>();
    if (nnz > inst.m()) {
      cor.applies = true;
      cor.conclusion = Conclusion::InfiniteInPattern;
    } else {
      cor.witness["reason"] = "nonzero count does not exceed m";
    }
    report.verdicts.push_back(std::move(gi));
    report.verdicts.push_back(std::move(cor));
  }

  std::stable_sort(report.verdicts.begin(), report.verdicts.end(),
                   [](const TheoremVerdict& a, const TheoremVerdict& b) {
                     if (a.id != b.id) return a.id < b.id;
                     if (a.splitting_index != b.splitting_index) return a.splitting_index < b.splitting_index;
                     return a.p_index < b.p_index;
                   });

  int best = 0;
  for (std::size_t i = 0; i < report.verdicts.size(); ++i) {
    const TheoremVerdict& v = report.verdicts[i];
    if (!v.applies) continue;
    const int s = detail::conclusion_strength(v.conclusion);
    if (s > best) {
      best = s;
      report.strongest = i;
    }
  }
  if (report.strongest) {
    const TheoremVerdict& v = report.verdicts[*report.strongest];
    report.summary = std::string(conclusion_name(v.conclusion)) + " via " + theorem_name(v.id) + ": " +
                     theorem_description(v.id);
  } else {
    report.summary = "no sufficient condition applies; enumeration may still decide desk-scale instances";
  }
  return report;
}

inline nlohmann::json report_to_json(const AnalysisReport& report) {
  nlohmann::json j;
  nlohmann::json verdicts = nlohmann::json::array();
  for (const TheoremVerdict& v : report.verdicts) {
    nlohmann::json jv;
    jv["theorem"] = theorem_name(v.id);
    jv["applies"] = v.applies;
    jv["conclusion"] = conclusion_name(v.conclusion);
    jv["witness"] = v.witness;
    verdicts.push_back(std::move(jv));
  }
  j["verdicts"] = std::move(verdicts);
  if (report.strongest) {
    const TheoremVerdict& v = report.verdicts[*report.strongest];
    nlohmann::json js;
    js["theorem"] = theorem_name(v.id);
    js["conclusion"] = conclusion_name(v.conclusion);
    js["witness"] = v.witness;
    j["strongest"] = std::move(js);
  } else {
    j["strongest"] = nullptr;
  }
  j["summary"] = report.summary;
  return j;
}

}  // namespace gavekit
