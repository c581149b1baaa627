#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "gavekit/config.hpp"
#include "gavekit/linalg.hpp"
#include "gavekit/matrix.hpp"

namespace gavekit {

// u certifies that C y = b, y >= 0 is infeasible.
inline bool verify_farkas(const Matrix& C, const Vector& b, const Vector& u, const Tolerances& tol = {}) {
  if (u.size() != C.rows() || b.size() != C.rows())
    throw InputError(ErrorCode::DimensionMismatch, "certificate length differs from row count");
  const Vector ctu = C.transpose() * u;
  for (Index j = 0; j < ctu.size(); ++j)
    if (ctu[j] > tol.feas_tol) return false;
  return b.dot(u) > tol.strict_tol;
}

namespace detail {

struct SimplexSolution {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Optimal;
  std::vector<double> x;       // primal values of the original variables
  double objective = 0.0;      // min-sense objective at x
  std::vector<double> farkas;  // infeasible only: dual certificate u
  std::vector<double> ray;     // unbounded only: recession direction; x holds the point where detected
};

// Dense tableau primal simplex, Bland's rule throughout. Phase 1 minimizes
// the artificial sum starting from the all-artificial basis; when the
// optimum stays positive its dual prices are the Farkas certificate.
class SimplexTableau {
 public:
  SimplexTableau(const Matrix& C, const Vector& b, std::size_t max_pivots)
      : k_(C.cols()), m0_(C.rows()), max_pivots_(max_pivots) {
    const Index m = C.rows();
    rows_.resize(m, std::vector<double>(k_ + m, 0.0));
    rhs_.resize(m);
    basis_.resize(m);
    flip_.resize(m);
    for (Index i = 0; i < m; ++i) {
      flip_[i] = b[i] < 0 ? -1.0 : 1.0;
      for (Index j = 0; j < k_; ++j) rows_[i][j] = flip_[i] * C(i, j);
      rows_[i][k_ + i] = 1.0;
      rhs_[i] = flip_[i] * b[i];
      basis_[i] = k_ + i;
    }
  }

  // Minimize sum of artificials. Returns the optimal phase-1 objective.
  double phase1() {
    std::vector<double> d(k_ + m_orig(), 0.0);
    for (Index j = k_; j < d.size(); ++j) d[j] = 1.0;
    const int rc = iterate(d, /*allow_artificial=*/true);
    if (rc != 0) throw NumericalError("phase-1 objective unbounded; tableau corrupted");
    phase1_costs_ = d;
    return objective(d);
  }

  // Dual prices of the phase-1 optimum mapped back through the row flips.
  std::vector<double> farkas_certificate() const {
    const std::vector<double> red = reduced_costs(phase1_costs_);
    std::vector<double> u(rows_.size());
    for (Index i = 0; i < rows_.size(); ++i) u[i] = flip_[i] * (1.0 - red[k_ + i]);
    return u;
  }

  // Pivot remaining artificials out of the basis; rows that cannot release
  // one are redundant and get dropped.
  void purge_artificials() {
    for (Index l = 0; l < rows_.size();) {
      if (basis_[l] < k_) {
        ++l;
        continue;
      }
      Index enter = k_;
      double best = piv_eps_;
      for (Index j = 0; j < k_; ++j) {
        if (std::abs(rows_[l][j]) > best) {
          best = std::abs(rows_[l][j]);
          enter = j;
        }
      }
      if (enter < k_) {
        pivot(l, enter);
        ++l;
      } else {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(l));
        rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(l));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(l));
        flip_.erase(flip_.begin() + static_cast<std::ptrdiff_t>(l));
      }
    }
  }

  // Minimize c over the original variables from the current basis.
  // Returns Optimal or Unbounded.
  SimplexSolution phase2(const std::vector<double>& c) {
    std::vector<double> d(k_ + m_orig(), 0.0);
    for (Index j = 0; j < k_; ++j) d[j] = c[j];
    SimplexSolution out;
    const int rc = iterate(d, /*allow_artificial=*/false);
    out.x = primal_point();
    if (rc == 0) {
      out.status = SimplexSolution::Status::Optimal;
      out.objective = objective(d);
    } else {
      out.status = SimplexSolution::Status::Unbounded;
      out.ray = unbounded_ray();
    }
    return out;
  }

  std::vector<double> primal_point() const {
    std::vector<double> x(k_, 0.0);
    for (Index i = 0; i < rows_.size(); ++i)
      if (basis_[i] < k_) x[basis_[i]] = rhs_[i];
    return x;
  }

 private:
  Index m_orig() const { return m0_; }

  double objective(const std::vector<double>& d) const {
    double obj = 0.0;
    for (Index i = 0; i < rows_.size(); ++i) obj += d[basis_[i]] * rhs_[i];
    return obj;
  }

  std::vector<double> reduced_costs(const std::vector<double>& d) const {
    std::vector<double> red(d);
    for (Index i = 0; i < rows_.size(); ++i) {
      const double cb = d[basis_[i]];
      if (cb == 0.0) continue;
      for (Index j = 0; j < red.size(); ++j) red[j] -= cb * rows_[i][j];
    }
    return red;
  }

  int iterate(const std::vector<double>& d, bool allow_artificial) {
    for (;;) {
      const std::vector<double> red = reduced_costs(d);
      const Index ncols = allow_artificial ? red.size() : k_;
      Index enter = ncols;
      for (Index j = 0; j < ncols; ++j) {
        if (red[j] < -red_eps_) {
          enter = j;
          break;  // Bland: first improving column
        }
      }
      if (enter == ncols) return 0;

      Index leave = rows_.size();
      double best_ratio = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < rows_.size(); ++i) {
        if (rows_[i][enter] <= piv_eps_) continue;
        const double ratio = rhs_[i] / rows_[i][enter];
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && (leave == rows_.size() || basis_[i] < basis_[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave == rows_.size()) {
        last_unbounded_col_ = enter;
        return 1;
      }
      pivot(leave, enter);
    }
  }

  std::vector<double> unbounded_ray() const {
    std::vector<double> ray(k_, 0.0);
    ray[last_unbounded_col_] = 1.0;
    for (Index i = 0; i < rows_.size(); ++i)
      if (basis_[i] < k_) ray[basis_[i]] = -rows_[i][last_unbounded_col_];
    for (double& v : ray)
      if (v < 0 && v > -1e-12) v = 0.0;
    return ray;
  }

  void pivot(Index l, Index e) {
    if (++pivots_ > max_pivots_) throw NumericalError("simplex pivot budget exhausted (cycling safeguard)");
    const double p = rows_[l][e];
    for (double& v : rows_[l]) v /= p;
    rhs_[l] /= p;
    rows_[l][e] = 1.0;
    for (Index i = 0; i < rows_.size(); ++i) {
      if (i == l) continue;
      const double f = rows_[i][e];
      if (f == 0.0) continue;
      for (Index j = 0; j < rows_[i].size(); ++j) rows_[i][j] -= f * rows_[l][j];
      rows_[i][e] = 0.0;
      rhs_[i] -= f * rhs_[l];
      if (rhs_[i] < 0 && rhs_[i] > -1e-11) rhs_[i] = 0.0;
    }
    basis_[l] = e;
  }

  Index k_;
  Index m0_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> rhs_;
  std::vector<Index> basis_;
  std::vector<double> flip_;
  std::vector<double> phase1_costs_;
  std::size_t max_pivots_;
  std::size_t pivots_ = 0;
  Index last_unbounded_col_ = 0;
  static constexpr double piv_eps_ = 1e-11;
  static constexpr double red_eps_ = 1e-11;
};

}  // namespace detail

struct FeasibilityOutcome {
  enum class Status { Feasible, Infeasible };
  Status status = Status::Feasible;
  Vector y;            // feasible point, length C.cols()
  Vector certificate;  // verified Farkas vector, length C.rows()

  bool feasible() const { return status == Status::Feasible; }
};

// Phase-1 simplex decision for C y = b, y >= 0. Either outcome is
// re-verified before it is returned; a verdict that fails its own check
// raises instead of lying.
inline FeasibilityOutcome feasible_nonneg(const Matrix& C, const Vector& b, const Tolerances& tol = {},
                                          std::size_t max_pivots = 100000) {
  if (b.size() != C.rows()) throw InputError(ErrorCode::DimensionMismatch, "rhs length differs from row count");
  detail::SimplexTableau tab(C, b, max_pivots);
  const double opt = tab.phase1();
  FeasibilityOutcome out;
  if (opt > tol.feas_tol) {
    out.status = FeasibilityOutcome::Status::Infeasible;
    out.certificate = Vector(tab.farkas_certificate());
    if (!verify_farkas(C, b, out.certificate, tol))
      throw NumericalError("phase-1 dual failed Farkas re-verification");
    return out;
  }
  out.status = FeasibilityOutcome::Status::Feasible;
  out.y = Vector(tab.primal_point());
  if ((C * out.y - b).inf_norm() > tol.feas_tol * (1.0 + b.inf_norm()) || out.y.min() < -tol.feas_tol)
    throw NumericalError("phase-1 point failed feasibility re-verification");
  return out;
}

struct StrictSupportOutcome {
  bool feasible = false;
  Vector certificate;      // infeasible only
  Vector y;                // length C.cols(), zero off the support
  double margin = 0.0;     // maximized uniform lower bound on the support entries
  bool unbounded = false;  // margin grows without bound (interior recession ray)
  bool boundary = false;   // feasible, but only with a support entry at zero
};

// Two stages: feasibility with off-support variables deleted, then
// maximize t subject to y_support >= t * 1.
inline StrictSupportOutcome strict_on_support(const Matrix& C, const Vector& b, const IndexList& support,
                                              const Tolerances& tol = {}, std::size_t max_pivots = 100000) {
  StrictSupportOutcome out;
  out.y = Vector::zeros(C.cols());

  if (support.empty()) {
    if (b.inf_norm() <= tol.feas_tol) {
      out.feasible = true;
      out.margin = std::numeric_limits<double>::infinity();
      return out;
    }
    out.feasible = false;
    out.certificate = b.scaled(10.0 / b.inf_norm());
    return out;
  }

  const Matrix sub = select_columns(C, support);
  const Index k = support.size();

  const FeasibilityOutcome stage1 = feasible_nonneg(sub, b, tol, max_pivots);
  if (!stage1.feasible()) {
    out.feasible = false;
    out.certificate = stage1.certificate;
    return out;
  }
  out.feasible = true;

  // max t  s.t.  sub * z + (sub * 1) t = b,  z >= 0,  t >= 0; y = z + t * 1.
  Matrix aug(C.rows(), k + 1);
  for (Index i = 0; i < C.rows(); ++i) {
    double rowsum = 0.0;
    for (Index j = 0; j < k; ++j) {
      aug.set(i, j, sub(i, j));
      rowsum += sub(i, j);
    }
    aug.set(i, k, rowsum);
  }
  std::vector<double> costs(k + 1, 0.0);
  costs[k] = -1.0;

  detail::SimplexTableau tab(aug, b, max_pivots);
  if (tab.phase1() > tol.feas_tol) throw NumericalError("stage-2 tableau lost stage-1 feasibility");
  tab.purge_artificials();
  const detail::SimplexSolution s2 = tab.phase2(costs);

  std::vector<double> ytil(k);
  if (s2.status == detail::SimplexSolution::Status::Unbounded) {
    out.unbounded = true;
    out.margin = std::numeric_limits<double>::infinity();
    // walk far enough along the ray that every support entry clears 1
    const double dt = s2.ray[k];
    const double lambda = std::max(1.0, 2.0 / std::max(dt, 1e-9));
    for (Index j = 0; j < k; ++j)
      ytil[j] = (s2.x[j] + lambda * s2.ray[j]) + (s2.x[k] + lambda * dt);
  } else {
    const double t = s2.x[k];
    out.margin = t;
    out.boundary = t <= tol.strict_tol;
    for (Index j = 0; j < k; ++j) ytil[j] = s2.x[j] + t;
  }

  std::vector<double> full(C.cols(), 0.0);
  for (Index j = 0; j < k; ++j) full[support[j]] = ytil[j];
  out.y = Vector(std::move(full));
  if ((C * out.y - b).inf_norm() > tol.feas_tol * (1.0 + b.inf_norm()))
    throw NumericalError("stage-2 point failed feasibility re-verification");
  return out;
}

}  // namespace gavekit
