#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "gavekit/analysis.hpp"
#include "gavekit/feasibility.hpp"
#include "gavekit/model.hpp"
#include "gavekit/rng.hpp"

namespace gavekit {

struct IterationTrace {
  std::deque<Vector> iterates_kept;  // ring buffer of the last few iterates
  std::vector<double> step_norms;    // |x_{k+1} - x_k|_inf per step
  bool converged = false;
  std::size_t iterations = 0;
  double min_entry_seen = std::numeric_limits<double>::infinity();  // over every iterate

  static constexpr std::size_t kKeep = 5;
  void record(const Vector& x, double step) {
    iterates_kept.push_back(x);
    if (iterates_kept.size() > kKeep) iterates_kept.pop_front();
    step_norms.push_back(step);
    if (x.size()) min_entry_seen = std::min(min_entry_seen, x.min());
  }
};

struct FixedPointResult {
  SolutionRecord record;
  IterationTrace trace;
  bool pattern_matched = true;   // y-iterations: sign(x) equals the requested pattern
  bool residual_accepted = false;
};

// x <- M^+ (N x + B |x| + b) on an A-splitting. Under the contraction
// condition the limit is independent of x0 and solves the system. Stopping
// always tests the inf-norm of the step; step_norm only selects the norm
// recorded in the trace (so rate checks can match the contraction factor's p).
inline FixedPointResult fixed_point_x(const GaveInstance& inst, const Splitting& split, const Vector& x0,
                                      const Tolerances& tol = {}, NormKind step_norm = NormKind::Inf) {
  if (split.target != SplitTarget::OnA)
    throw InputError(ErrorCode::BadField, "fixed_point_x needs an A-splitting");
  if (x0.size() != inst.n()) throw InputError(ErrorCode::DimensionMismatch, "x0 length differs from n");

  FixedPointResult out;
  Vector x = x0;
  for (std::size_t k = 0; k < tol.max_iterations; ++k) {
    const Vector next = split.M_pinv * (split.N * x + inst.B * x.abs() + inst.b);
    const Vector diff = next - x;
    out.trace.record(next, vector_norm(diff, step_norm));
    x = next;
    ++out.trace.iterations;
    if (diff.inf_norm() <= tol.step_tol) {
      out.trace.converged = true;
      break;
    }
  }
  out.record = SolutionRecord(inst, x, Multiplicity::Unknown, tol);
  out.residual_accepted = out.record.residual_inf <= tol.residual_tol * (1.0 + inst.b.inf_norm());
  return out;
}

// y-iteration for a full sign pattern s. On a B-splitting this is
//   y0 = -M^+ b,          y <- M^+ ((N + A diag(s)) y - b);
// on an A-splitting the same derivation through z = diag(s) y gives
//   y0 = diag(s) M^+ b,   y <- diag(s) M^+ ((N diag(s) + B) y + b).
// Returns x = diag(s) y with the achieved pattern; a mismatch is reported,
// not hidden.
inline FixedPointResult fixed_point_y(const GaveInstance& inst, const Splitting& split, const SignPattern& s,
                                      const Tolerances& tol = {}) {
  if (s.size() != inst.n()) throw InputError(ErrorCode::DimensionMismatch, "sign pattern length differs from n");
  if (!s.full_sign()) throw InputError(ErrorCode::BadField, "fixed_point_y needs a full sign pattern");

  Matrix scaled(inst.m(), inst.n());  // A diag(s) or N diag(s)
  const Matrix& base = split.target == SplitTarget::OnB ? inst.A : split.N;
  for (Index i = 0; i < inst.m(); ++i)
    for (Index j = 0; j < inst.n(); ++j) scaled.set(i, j, base(i, j) * static_cast<double>(s[j]));

  FixedPointResult out;
  Vector y = split.target == SplitTarget::OnB ? -(split.M_pinv * inst.b)
                                              : apply_pattern(s, split.M_pinv * inst.b);
  for (std::size_t k = 0; k < tol.max_iterations; ++k) {
    Vector next = split.target == SplitTarget::OnB
                      ? split.M_pinv * (scaled * y + split.N * y - inst.b)
                      : apply_pattern(s, split.M_pinv * (scaled * y + inst.B * y + inst.b));
    const double step = (next - y).inf_norm();
    out.trace.record(next, step);
    y = std::move(next);
    ++out.trace.iterations;
    if (step <= tol.step_tol) {
      out.trace.converged = true;
      break;
    }
  }
  out.record = SolutionRecord(inst, apply_pattern(s, y), Multiplicity::Unknown, tol);
  out.pattern_matched = out.record.pattern == s;
  out.residual_accepted = out.record.residual_inf <= tol.residual_tol * (1.0 + inst.b.inf_norm());
  return out;
}

// ---------------------------------------------------------------------------
// Exact-pattern solving through the nonnegative feasibility of the transform.

struct SolvePatternOutcome {
  enum class Status { Solved, Infeasible, Boundary };
  Status status = Status::Infeasible;
  std::optional<SolutionRecord> record;  // Solved
  Vector certificate;                    // Infeasible (verified)
  double margin = 0.0;
  bool recession = false;  // strict region contains a ray

  bool solved() const { return status == Status::Solved; }
};

inline SolvePatternOutcome solve_pattern(const GaveInstance& inst, const SignPattern& s,
                                         const Tolerances& tol = {}) {
  const Matrix c = sign_transform(inst, s);
  const IndexList support = s.support();
  const StrictSupportOutcome lp = strict_on_support(c, inst.b, support, tol);

  SolvePatternOutcome out;
  out.margin = lp.margin;
  out.recession = lp.unbounded;
  if (!lp.feasible) {
    out.status = SolvePatternOutcome::Status::Infeasible;
    out.certificate = lp.certificate;
    return out;
  }
  if (lp.boundary) {
    out.status = SolvePatternOutcome::Status::Boundary;
    return out;
  }

  // multiplicity within the pattern: unique iff the support columns are
  // independent and the strict region has no ray
  Multiplicity mult = Multiplicity::InfiniteInPattern;
  if (!lp.unbounded && (support.empty() || numerical_rank(select_columns(c, support)) == support.size()))
    mult = Multiplicity::UniqueInPattern;

  SolutionRecord rec(inst, apply_pattern(s, lp.y), mult, tol);
  if (!(rec.pattern == s)) throw NumericalError("pattern solve produced a sign mismatch");
  out.status = SolvePatternOutcome::Status::Solved;
  out.record = std::move(rec);
  return out;
}

// ---------------------------------------------------------------------------
// Sampling an infinite family around a known solution.

struct FamilySample {
  std::vector<SolutionRecord> members;  // pairwise distinct by >= 1e-6 in inf-norm
  SignPattern pattern;
  bool complete = false;
  std::string diagnostic;
};

// Relative perturbation of the free support coordinates: fix the off-support
// zeros, perturb support entries outside the pivot block, re-solve the pivot
// block, shrink until the signs survive.
inline FamilySample sample_family(const GaveInstance& inst, const SolutionRecord& base, std::size_t k,
                                  std::uint64_t seed, const Tolerances& tol = {}) {
  FamilySample out;
  out.pattern = base.pattern;
  if (base.residual_inf > tol.residual_tol * (1.0 + inst.b.inf_norm()))
    throw InputError(ErrorCode::BadField, "base record is not a verified solution");

  const SignPattern& s = base.pattern;
  const IndexList support = s.support();
  const Matrix c = sign_transform(inst, s);
  const Matrix c_support = select_columns(c, support);
  const Index r = support.empty() ? 0 : numerical_rank(c_support);

  auto verified = [&](const Vector& x) {
    SolutionRecord rec(inst, x, Multiplicity::Unknown, tol);
    return rec.residual_inf <= tol.residual_tol * (1.0 + inst.b.inf_norm()) && rec.pattern == s;
  };

  out.members.push_back(SolutionRecord(inst, base.x, base.multiplicity, tol));
  if (k <= 1) {
    out.complete = true;
    return out;
  }

  auto qualifying = detail::find_qualifying_submatrix(c, support, r);
  IndexList free_cols;  // support columns outside the pivot block
  IndexList i1, i2;
  if (qualifying) {
    i1 = qualifying->first;
    i2 = qualifying->second;
    for (Index j : support)
      if (std::find(i2.begin(), i2.end(), j) == i2.end()) free_cols.push_back(j);
  }
  if (free_cols.empty()) {
    out.diagnostic = qualifying ? "no free support coordinate: the pattern solution is rigid"
                                : "no qualifying submatrix inside the support";
    return out;
  }

  const Matrix block = submatrix(c, i1, i2);
  SplitMix64 rng(seed);
  const Vector y_base = apply_pattern(s, base.x);  // nonnegative on the support

  double eta_scale = 0.5;
  std::size_t attempts = 0;
  const std::size_t max_attempts = 200 * k;
  while (out.members.size() < k && attempts < max_attempts) {
    ++attempts;
    std::vector<double> y(y_base.data());
    for (Index j : free_cols) y[j] = y_base[j] * (1.0 + rng.uniform(-eta_scale, eta_scale));

    // rebuild the pivot block from the perturbed free part
    std::vector<double> rhs(i1.size());
    for (Index bi = 0; bi < i1.size(); ++bi) {
      double acc = inst.b[i1[bi]];
      for (Index j = 0; j < c.cols(); ++j) {
        if (std::find(i2.begin(), i2.end(), j) != i2.end()) continue;
        acc -= c(i1[bi], j) * y[j];
      }
      rhs[bi] = acc;
    }
    Vector pivot_part;
    try {
      pivot_part = solve_square(block, Vector(std::move(rhs)));
    } catch (const Error&) {
      eta_scale *= 0.5;
      continue;
    }
    for (Index bi = 0; bi < i2.size(); ++bi) y[i2[bi]] = pivot_part[bi];

    const Vector x = apply_pattern(s, Vector(std::move(y)));
    if (!verified(x)) {
      eta_scale *= 0.5;
      continue;
    }
    bool distinct = true;
    for (const SolutionRecord& m : out.members)
      if ((m.x - x).inf_norm() < 1e-6) distinct = false;
    if (!distinct) continue;
    out.members.push_back(SolutionRecord(inst, x, Multiplicity::Unknown, tol));
  }
  out.complete = out.members.size() >= k;
  if (!out.complete && out.diagnostic.empty())
    out.diagnostic = "perturbation budget exhausted before reaching the requested count";
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive pattern enumeration: the desk-scale oracle.

struct PatternEntry {
  SignPattern s;
  enum class Status { Infeasible, Unique, Infinite } status = Status::Infeasible;
  std::optional<Vector> x;
  std::optional<Vector> certificate;
  bool boundary = false;  // weakly feasible, but not with the exact pattern
};

struct EnumerationReport {
  enum class Total { Zero, Finite, Infinite } total = Total::Zero;
  std::size_t count_if_finite = 0;
  std::vector<PatternEntry> patterns;  // lexicographic in (-1, 0, +1) digit order

  std::optional<const PatternEntry*> find(const SignPattern& s) const {
    for (const PatternEntry& e : patterns)
      if (e.s == s) return &e;
    return std::nullopt;
  }
};

// Decides, for every s in {-1,0,+1}^n, whether the instance has a solution
// with exactly that sign pattern, and whether it is unique within the
// pattern. Refuses to start when 3^n exceeds the budget: the oracle stays
// exact or does not answer.
inline EnumerationReport enumerate_patterns(const GaveInstance& inst, std::size_t budget = 531441,
                                            const Tolerances& tol = {}) {
  const Index n = inst.n();
  double combos = 1;
  for (Index i = 0; i < n; ++i) combos *= 3;
  if (combos > static_cast<double>(budget))
    throw BudgetError("pattern space 3^" + std::to_string(n) + " exceeds the enumeration budget");

  EnumerationReport report;
  std::vector<int> digits(n, -1);
  bool carry_done = false;
  std::size_t infinite_patterns = 0;

  while (!carry_done) {
    const SignPattern s(std::vector<int>(digits.begin(), digits.end()));
    const SolvePatternOutcome r = solve_pattern(inst, s, tol);
    PatternEntry entry;
    entry.s = s;
    switch (r.status) {
      case SolvePatternOutcome::Status::Solved:
        if (r.record->multiplicity == Multiplicity::UniqueInPattern) {
          entry.status = PatternEntry::Status::Unique;
          ++report.count_if_finite;
        } else {
          entry.status = PatternEntry::Status::Infinite;
          ++infinite_patterns;
        }
        entry.x = r.record->x;
        break;
      case SolvePatternOutcome::Status::Boundary:
        entry.status = PatternEntry::Status::Infeasible;
        entry.boundary = true;
        break;
      case SolvePatternOutcome::Status::Infeasible:
        entry.status = PatternEntry::Status::Infeasible;
        entry.certificate = r.certificate;
        break;
    }
    report.patterns.push_back(std::move(entry));

    Index pos = n;
    carry_done = true;
    while (pos > 0) {
      --pos;
      if (digits[pos] < 1) {
        ++digits[pos];
        for (Index j = pos + 1; j < n; ++j) digits[j] = -1;
        carry_done = false;
        break;
      }
    }
  }

  if (infinite_patterns > 0)
    report.total = EnumerationReport::Total::Infinite;
  else if (report.count_if_finite > 0)
    report.total = EnumerationReport::Total::Finite;
  else
    report.total = EnumerationReport::Total::Zero;
  return report;
}

inline nlohmann::json enumeration_to_json(const EnumerationReport& report) {
  nlohmann::json j;
  switch (report.total) {
    case EnumerationReport::Total::Zero: j["total"] = "0"; break;
    case EnumerationReport::Total::Finite: j["total"] = "finite"; break;
    default: j["total"] = "infinite"; break;
  }
  j["count_if_finite"] = report.count_if_finite;
  nlohmann::json arr = nlohmann::json::array();
  for (const PatternEntry& e : report.patterns) {
    nlohmann::json je;
    je["s"] = pattern_to_json(e.s);
    switch (e.status) {
      case PatternEntry::Status::Infeasible: je["status"] = "infeasible"; break;
      case PatternEntry::Status::Unique: je["status"] = "unique"; break;
      default: je["status"] = "infinite"; break;
    }
    if (e.x) je["x"] = detail::vector_to(*e.x);
    if (e.certificate) je["certificate"] = detail::vector_to(*e.certificate);
    if (e.boundary) je["boundary"] = true;
    arr.push_back(std::move(je));
  }
  j["patterns"] = std::move(arr);
  return j;
}

}  // namespace gavekit
