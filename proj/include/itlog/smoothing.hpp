#ifndef ITLOG_SMOOTHING_HPP
#define ITLOG_SMOOTHING_HPP

#include <complex>

#include "itlog/lfunction.hpp"
#include "itlog/region.hpp"

namespace itlog {

// The canonical smooth cutoff: 1 on [0,1], 0 on [2,inf), and the exp-based
// partition-of-unity profile h(2-x)/(h(2-x)+h(x-1)), h(u)=exp(-1/u), in
// between.  Fixing this one concrete bump makes every smoothed quantity
// reproducible bit for bit.
double bump(double x);
double bump_derivative(double x);

// Mellin transform phat(s) = int_0^inf bump(x) x^{s-1} dx, computed for
// Re s > -1, s != 0 through one integration by parts:
// phat(s) = -(1/s) int_1^2 bump'(x) x^s dx  (simple pole at 0, residue 1).
ApproxValue mellin_hat(std::complex<double> s);

// Smoothly truncated coefficient sum:
//   sum_{2 <= n <= 2X, n = p^k} b(p^k) (log n)^{-m} bump(n/X) n^{-s}.
std::complex<double> smoothed_sum(const LFunction& L, int m,
                                  std::complex<double> s, double X);

} // namespace itlog

#endif
