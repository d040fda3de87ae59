#pragma once

#include <functional>
#include <span>

namespace onemax {

/// Adaptive Simpson integration of f on [a, b] to absolute tolerance abs_tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);

/// Same, but the interval is first split at the given interior breakpoints
/// (kinks of piecewise integrands); points outside (a, b) are ignored.
double integrate_with_breakpoints(const std::function<double(double)>& f, double a, double b,
                                  std::span<const double> breakpoints, double abs_tol = 1e-10);

} // namespace onemax
