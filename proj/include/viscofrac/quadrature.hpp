#pragma once

#include <functional>

namespace viscofrac {

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance abs_tol
/// (Richardson-corrected, recursion depth capped at max_depth).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-10, int max_depth = 50);

}  // namespace viscofrac
