#ifndef ITLOG_TEST_ORACLES_HPP
#define ITLOG_TEST_ORACLES_HPP

// Independent reference implementations used by the tests.  Everything here
// deliberately avoids the library's own sieve, quadrature, and evaluation
// code paths: sums are brute-force, primes come from a plain Eratosthenes
// sieve, and high-precision accumulation uses __float128.

#include <complex>
#include <cstdint>
#include <vector>

#include "itlog/lfunction.hpp"

namespace itlog_test {

using cplx = std::complex<double>;

// Deterministic generator for test fixtures (64-bit mix, own copy).
struct TestRng {
    std::uint64_t state;
    explicit TestRng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    double uniform();                    // [0, 1)
    double uniform(double lo, double hi);
};

// Plain sieve of Eratosthenes (no wheel, no segmentation).
std::vector<std::uint64_t> oracle_primes(std::uint64_t bound);

// Brute-force evaluation of the m-fold-integrated log-series
//   sum over prime powers n = p^k <= N of  b(p^k) (log n)^{-m} n^{-s}
// accumulated in 128-bit floats; returns the values for m = 0, 1, 2 in one
// pass.  Construction precomputes the prime-power list and 128-bit logs.
class BruteSeries {
public:
    explicit BruteSeries(std::uint64_t N);
    std::uint64_t truncation() const { return N_; }
    // out[m] for m = 0,1,2
    void eval(const itlog::LFunction& L, cplx s, cplx out[3]) const;

private:
    std::uint64_t N_;
    struct Entry {
        std::uint32_t p;
        std::uint32_t k;
#if defined(ITLOG_HAVE_QUADMATH) && defined(__SIZEOF_FLOAT128__)
        __float128 log_n;
#else
        long double log_n;
#endif
    };
    std::vector<Entry> entries_;
};

// Five-point central difference, error O(h^4 f^(5)).
template <typename F>
cplx five_point_derivative(F&& f, double x, double h) {
    return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) /
           (12.0 * h);
}

// Dirichlet coefficients of exp(B) where B(s) = sum b(n) n^{-s} is supported
// on prime powers: a(1) = 1 and
//   a(n) log n = sum over proper prime-power divisors d | n of
//                b(d) log d * a(n/d).
std::vector<cplx> exp_coefficients(const itlog::LFunction& L,
                                   std::uint64_t nmax);

// Merged-measure oracle: total length of the union of [lo_i, hi_i] clipped
// to [a, b].
double clipped_union_measure(std::vector<std::pair<double, double>> windows,
                             double a, double b);

} // namespace itlog_test

#endif
