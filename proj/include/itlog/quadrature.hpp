#ifndef ITLOG_QUADRATURE_HPP
#define ITLOG_QUADRATURE_HPP

#include <complex>
#include <functional>

namespace itlog {

struct QuadResult {
    std::complex<double> value{0.0, 0.0};
    double err_estimate = 0.0;
    bool converged = true;
    int evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7/K15) integration of a complex-valued function on
// a finite interval to an absolute tolerance.  Panels are processed left to
// right with depth-first bisection and summed in spatial order, so the result
// is deterministic.  Throws tolerance_error when the panel budget is
// exhausted before convergence (non-converged panels are never silently
// accepted unless allow_failure is set, in which case converged=false).
QuadResult integrate_gk(const std::function<std::complex<double>(double)>& f,
                        double a, double b, double abs_tol,
                        int max_panels = 4000, bool allow_failure = false);

} // namespace itlog

#endif
