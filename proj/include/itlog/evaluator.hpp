#ifndef ITLOG_EVALUATOR_HPP
#define ITLOG_EVALUATOR_HPP

#include <map>
#include <memory>

#include "itlog/eval_core.hpp"
#include "itlog/lfunction.hpp"
#include "itlog/region.hpp"

namespace itlog {

// Numeric knobs shared by the evaluator stack.  Every field is surfaced as a
// CLI flag; defaults are the pinned reproducible configuration.
struct EvalOptions {
    double quad_tol = 1e-9;        // absolute tolerance of the alpha-quadrature
    double sigma_c = 3.0;          // crossover: quadrature below, series above
    double anchor_sigma = 3.0;     // branch anchor abscissa (>= sigma_c)
    std::uint64_t series_N = 200000; // default truncation of coefficient sums
    double zero_threshold = 1e-12; // |L| below this on a path => zero-on-path
    double min_step = 1e-9;        // continuation step underflow limit
    int max_quad_panels = 4000;
};

// Branch-continuous log L(. + it) along a horizontal line.  The branch is
// anchored at anchor_sigma by the absolutely convergent coefficient series
// (the +infinity branch) and extended leftward by adaptive continuation:
// each accepted step must change the value by < 0.5 and the argument by
// < pi/2, halving the step otherwise.  Every queried abscissa becomes an
// anchor, so later queries on the same line are cheap.
class LogTracker {
public:
    LogTracker(const LFunction& L, double t, EvalOptions opts = {});

    // Tracked log at sigma; throws zero_on_path_error / continuation_error /
    // pole_error as the walk demands.
    ApproxValue log_at(double sigma);

    // Plain L(sigma + it) through the fixed-height backend.
    ApproxValue eval_L_at(double sigma) const;

    double t() const { return t_; }
    double anchor_sigma() const { return opts_.anchor_sigma; }
    const LFunction& lfunction() const { return *L_; }

private:
    const LFunction* L_;
    double t_;
    EvalOptions opts_;
    FixedTBackend backend_;
    std::shared_ptr<const std::vector<PrimePower>> powers_;
    // sigma -> (log value, err) with largest sigma first
    std::map<double, std::pair<cplx, double>, std::greater<double>> anchors_;

    std::pair<cplx, double> series_log(double sigma) const;
    void walk_down_to(double target);
};

// L(s) by the instance's analytic-continuation backend (Euler–Maclaurin for
// zeta, Hurwitz combination for Dirichlet L, coefficient series for files).
ApproxValue eval_L(const LFunction& L, cplx s);

// Branch-tracked log L(sigma + it), anchored at sigma_start (values of
// sigma_start below the internal anchor abscissa are reached by continuation
// from the anchor; the result is the same branch).
ApproxValue log_L_tracked(const LFunction& L, double sigma, double t,
                          double sigma_start = 3.0, EvalOptions opts = {});

// Truncated coefficient series for the m-fold log-integral,
//   sum_{2 <= n <= N, n = p^k} b(p^k) (log n)^{-m} n^{-s},
// valid for Re s > 1, with a rigorous tail majorant in err_bound.
ApproxValue eval_Hm_series(const LFunction& L, int m, cplx s, std::uint64_t N);

// Full evaluator: series tail above sigma_c handled termwise, the segment
// [sigma, sigma_c] by adaptive quadrature of the tracked log against the
// collapsed kernel (alpha-sigma)^{m-1}/(m-1)!.  A tracker for the same line
// may be supplied to share continuation work across calls.
ApproxValue eval_Hm(const LFunction& L, int m, cplx s, EvalOptions opts = {},
                    LogTracker* shared_tracker = nullptr);

// Exact truncated Dirichlet polynomial sum_{2 <= n <= y} of the same terms.
cplx dirichlet_poly(const LFunction& L, int m, cplx s, double y);

// C * y^{sigma3 - sigma4} * (log T)^3.
double poly_error_envelope(double sigma3, double sigma4, double y, double T,
                           double C);

} // namespace itlog

#endif
