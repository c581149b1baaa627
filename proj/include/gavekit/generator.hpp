#pragma once

#include <optional>
#include <string>

#include "gavekit/analysis.hpp"
#include "gavekit/model.hpp"
#include "gavekit/rng.hpp"

namespace gavekit {

enum class TargetProperty { None, ContractionA, Submatrix, SignconeB, StrictSignconeB };

inline std::optional<TargetProperty> property_from_name(const std::string& name) {
  if (name == "none") return TargetProperty::None;
  if (name == "contraction-A") return TargetProperty::ContractionA;
  if (name == "submatrix") return TargetProperty::Submatrix;
  if (name == "signcone-B") return TargetProperty::SignconeB;
  if (name == "strict-signcone-B") return TargetProperty::StrictSignconeB;
  return std::nullopt;
}

struct GeneratorConfig {
  Index m = 2;
  Index n = 3;
  TargetProperty property = TargetProperty::None;
  bool trivial_splitting = false;  // sign-cone properties: force M = B, N = 0
  std::size_t max_rejections = 200;
  Tolerances tol;
};

struct GeneratorResult {
  GaveInstance inst;
  std::optional<Splitting> splitting;   // sign-cone properties carry their splitting
  std::optional<SignPattern> pattern;   // strict property carries its pattern
  std::size_t rejections = 0;
};

namespace detail {

inline Matrix random_matrix(SplitMix64& rng, Index rows, Index cols, double lo, double hi) {
  std::vector<double> d(rows * cols);
  for (double& x : d) x = rng.uniform(lo, hi);
  return Matrix(rows, cols, std::move(d));
}

inline Vector random_vector(SplitMix64& rng, Index len, double lo, double hi) {
  std::vector<double> d(len);
  for (double& x : d) x = rng.uniform(lo, hi);
  return Vector(std::move(d));
}

}  // namespace detail

// Deterministic in the seed. The requested property is re-verified with the
// corresponding checker; draws that fail it count as rejections.
inline GeneratorResult random_instance(const GeneratorConfig& cfg, std::uint64_t seed) {
  if (cfg.m < 1 || cfg.n < cfg.m)
    throw InputError(ErrorCode::BadField, "field m/n: generator needs 1 <= m <= n");
  SplitMix64 rng(seed ^ 0x5eedu);
  const Index m = cfg.m, n = cfg.n;

  for (std::size_t attempt = 0; attempt < cfg.max_rejections; ++attempt) {
    switch (cfg.property) {
      case TargetProperty::None: {
        GaveInstance inst(detail::random_matrix(rng, m, n, -1.0, 1.0),
                          detail::random_matrix(rng, m, n, -1.0, 1.0),
                          detail::random_vector(rng, m, -1.0, 1.0));
        return {std::move(inst), std::nullopt, std::nullopt, attempt};
      }

      case TargetProperty::ContractionA: {
        Matrix a = detail::random_matrix(rng, m, n, -1.0, 1.0);
        if (numerical_rank(a) < m) continue;
        Matrix b_mat = detail::random_matrix(rng, m, n, -1.0, 1.0);
        const double q = op_norm(pinv(a) * b_mat, NormKind::Two);
        if (q > 0) b_mat = b_mat.scaled(rng.uniform(0.2, 0.8) / q);
        GaveInstance inst(std::move(a), std::move(b_mat), detail::random_vector(rng, m, -1.0, 1.0));
        const Splitting split = Splitting::trivial_on(inst, SplitTarget::OnA);
        if (!check_contraction_A(inst, split, NormKind::Two, cfg.tol).applies) continue;
        return {std::move(inst), split, std::nullopt, attempt};
      }

      case TargetProperty::Submatrix: {
        Matrix a = detail::random_matrix(rng, m, n, -1.0, 1.0);
        IndexList lead(m);
        for (Index i = 0; i < m; ++i) lead[i] = i;
        const Matrix a1 = select_columns(a, lead);
        if (numerical_rank(a1) < m) continue;
        Matrix b_mat = detail::random_matrix(rng, m, n, -1.0, 1.0);
        Matrix a1inv_b1(m, m);
        for (Index j = 0; j < m; ++j) {
          const Vector col = solve_square(a1, select_columns(b_mat, lead).col(j));
          for (Index i = 0; i < m; ++i) a1inv_b1.set(i, j, col[i]);
        }
        const double q = op_norm(a1inv_b1, NormKind::Two);
        if (q > 0) b_mat = b_mat.scaled(rng.uniform(0.2, 0.8) / q);
        GaveInstance inst(std::move(a), std::move(b_mat), detail::random_vector(rng, m, -1.0, 1.0));
        if (!check_submatrix_condition(inst, NormKind::Two, {}, cfg.tol).applies) continue;
        return {std::move(inst), std::nullopt, std::nullopt, attempt};
      }

      case TargetProperty::SignconeB:
      case TargetProperty::StrictSignconeB: {
        const bool strict = cfg.property == TargetProperty::StrictSignconeB;
        // M > 0 gives full row rank and a positive row space to build
        // sign-controlled products in: columns of M^T W stay nonnegative and
        // M^+ M fixes them exactly.
        Matrix m_part = detail::random_matrix(rng, m, n, 0.2, 1.0);
        if (numerical_rank(m_part) < m) continue;
        const Matrix mt = m_part.transpose();

        const Vector w = detail::random_vector(rng, m, 0.2, 1.0);
        const Vector z = mt * w;  // strictly positive, in the row space
        const Vector b_vec = -(m_part * z);

        Matrix y = mt * detail::random_matrix(rng, m, n, 0.0, 1.0);  // n x n, >= 0, columns in row space
        double gamma = 1.0;
        if (strict) {
          double lo = z[0], hi = z[0];
          for (Index i = 1; i < z.size(); ++i) {
            lo = std::min(lo, z[i]);
            hi = std::max(hi, z[i]);
          }
          gamma = lo / hi;
        }
        const double target = strict ? 0.4 * gamma / 2.0 : rng.uniform(0.2, 0.8);
        const double cur = op_norm(y, strict ? NormKind::Inf : NormKind::Two);
        if (cur > 0) y = y.scaled(target / cur);

        std::vector<int> s_digits(n, 1);
        if (strict)
          for (int& d : s_digits) d = rng.pick_sign();
        const SignPattern s(std::move(s_digits));

        const Matrix g_target = m_part * y;  // equals N + A diag(s) by construction
        const Matrix n_part = cfg.trivial_splitting ? Matrix(m, n) : detail::random_matrix(rng, m, n, -0.5, 0.5);
        Matrix a(m, n);
        for (Index i = 0; i < m; ++i)
          for (Index j = 0; j < n; ++j)
            a.set(i, j, (g_target(i, j) - n_part(i, j)) * static_cast<double>(s[j]));
        Matrix b_split = m_part - n_part;

        GaveInstance inst(std::move(a), std::move(b_split), b_vec);
        const Splitting split = Splitting::make(inst, SplitTarget::OnB, m_part);
        const auto verdicts = check_signcone_B(inst, split, s, strict ? NormKind::Inf : NormKind::Two, cfg.tol);
        const TheoremId want_a = s == SignPattern::all_ones(n)
                                     ? (split.trivial ? TheoremId::CorNonective : TheoremId::ThmNonective)
                                     : TheoremId::ThmZn1a;
        bool ok = false;
        for (const TheoremVerdict& v : verdicts)
          if ((strict && v.id == TheoremId::ThmZn1b && v.applies) ||
              (!strict && v.id == want_a && v.applies))
            ok = true;
        if (!ok) continue;
        return {std::move(inst), split, s, attempt};
      }
    }
  }
  throw BudgetError("generator rejection budget exhausted for the requested property (m=" +
                    std::to_string(m) + ", n=" + std::to_string(n) + ")");
}

}  // namespace gavekit
