#pragma once

#include <cstddef>

namespace gavekit {

// Shared numeric knobs. Defaults cover every desk-scale problem in the test
// suite; override per call where a caller needs to.
struct Tolerances {
  double feas_tol = 1e-9;        // LP feasibility: residual and nonnegativity slack
  double strict_tol = 1e-9;      // "strictly positive" threshold (margins, Farkas b'u)
  double strict_margin = 1e-12;  // strict "< 1" comparisons test against 1 - strict_margin
  double sign_tol = 1e-12;       // entrywise sign checks on computed matrices/vectors
  double residual_tol = 1e-8;    // solution acceptance, scaled by (1 + |b|_inf)
  double step_tol = 1e-10;       // fixed-point stopping test on |x_{k+1} - x_k|_inf
  std::size_t max_iterations = 10000;
  double zero_pattern_rel = 1e-10;  // |x_i| <= zero_pattern_rel * (1 + |x|_inf) counts as 0

  bool strictly_less_than_one(double value) const { return value < 1.0 - strict_margin; }
  bool strictly_less(double value, double bound) const { return value < bound - strict_margin; }
};

}  // namespace gavekit
