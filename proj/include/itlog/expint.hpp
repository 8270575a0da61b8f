#ifndef ITLOG_EXPINT_HPP
#define ITLOG_EXPINT_HPP

namespace itlog {

// Generalized exponential integral E_n(x) = int_1^inf e^{-x t} t^{-n} dt for
// x > 0 (and x = 0 with n >= 2, where E_n(0) = 1/(n-1)).  Series for small x,
// Lentz continued fraction for large x; ~1e-14 relative accuracy.
double expint_En(int n, double x);

// Tail majorant used by the truncated coefficient series: an upper bound for
// int_N^inf x^{lambda_exponent} (log x)^{-m} dx, namely
// a^{1-m} * E_m(lambda * a) with a = log N and lambda = -(lambda_exponent+1),
// valid when lambda > 0 and N >= 2.  Returns +inf when lambda <= 0.
double log_power_tail(double lambda, double logN, int m);

} // namespace itlog

#endif
