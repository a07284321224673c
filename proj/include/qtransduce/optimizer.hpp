#pragma once

// Bounded Nelder-Mead with seeded restarts. Works in the unit box; each
// coordinate maps to its bound linearly or logarithmically. Trial points are
// clamped into the box, so the objective is never called outside the bounds.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qtr {

struct Bound {
  double lo = 0.0;
  double hi = 0.0;
  bool log = false;  // needs lo > 0
};

struct NelderMeadOptions {
  int max_evaluations = 200;  // total over all starts; half goes to the centre start
  int restarts = 3;           // random starts after the centre start
  double tolerance = 1e-6;    // relative spread of the simplex values
  double x_tolerance = 1e-4;  // simplex diameter in the unit box
  std::uint64_t seed = 1;
  unsigned threads = 0;  // starts run in parallel; 0 = hardware concurrency
};

struct Evaluation {
  int start = 0;  // 0 = centre start
  std::vector<double> x;
  double value = 0.0;
  bool feasible = true;
  std::string error;
};

struct OptimizeResult {
  std::vector<double> best_x;
  double best_value = 0.0;
  int evaluations = 0;
  bool converged = false;  // at least one start met the tolerances
  std::vector<Evaluation> trace;  // ordered by start, then by evaluation
};

/// Minimizes f. An objective that throws qtr::Error marks the point infeasible.
/// Throws ConfigurationError for bad bounds and NoFeasiblePointError when no
/// evaluation succeeds.
OptimizeResult minimize(const std::function<double(const std::vector<double>&)>& f, const std::vector<Bound>& bounds,
                        const NelderMeadOptions& options = {});

}  // namespace qtr
