#pragma once

#include <functional>

namespace comsim::quad {

struct Result {
    double value = 0.0;
    /// Sum of per-interval |K15 - G7| estimates.
    double abs_error = 0.0;
    int intervals = 0;
    bool converged = false;
};

/// Globally adaptive 15-point Gauss-Kronrod on [a, b]. Bisects the interval
/// with the largest error estimate until the total estimate drops below
/// max(abs_tol, rel_tol * |value|) or max_intervals is reached.
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     double abs_tol = 0.0, int max_intervals = 2000);

/// Integral over (-inf, b] via omega = b - t / (1 - t).
Result gauss_kronrod_to_minus_infinity(const std::function<double(double)>& f, double b, double rel_tol,
                                       double abs_tol = 0.0, int max_intervals = 2000);

}  // namespace comsim::quad
