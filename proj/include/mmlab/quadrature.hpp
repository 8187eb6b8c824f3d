#pragma once

#include <functional>
#include <vector>

namespace mmlab {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  long evaluations = 0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod 7/15 on [a, b]. `seeds` lists interior points
/// where the initial interval is pre-split (near-pole regions, kinks).
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, double abs_tol,
                              const std::vector<double>& seeds = {}, int max_intervals = 4000);

/// Recursive adaptive Simpson. Slower than Gauss-Kronrod but an entirely
/// different rule; used as an independent cross-check.
QuadResult integrate_simpson(const std::function<double(double)>& f, double a, double b,
                             double abs_tol, int max_depth = 52);

}  // namespace mmlab
