#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#if defined(ITLOG_HAVE_QUADMATH) && defined(__SIZEOF_FLOAT128__)
#include <quadmath.h>
#endif

namespace itlog_test {

std::uint64_t TestRng::next() {
    // splitmix64 step
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double TestRng::uniform() { return double(next() >> 11) * 0x1.0p-53; }

double TestRng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::vector<std::uint64_t> oracle_primes(std::uint64_t bound) {
    std::vector<bool> comp(bound + 1, false);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= bound; j += i) comp[j] = true;
    }
    return out;
}

#if defined(ITLOG_HAVE_QUADMATH) && defined(__SIZEOF_FLOAT128__)
using real128 = __float128;
static real128 r128_log(real128 x) { return logq(x); }
static real128 r128_exp(real128 x) { return expq(x); }
static real128 r128_cos(real128 x) { return cosq(x); }
static real128 r128_sin(real128 x) { return sinq(x); }
#else
using real128 = long double;
static real128 r128_log(real128 x) { return logl(x); }
static real128 r128_exp(real128 x) { return expl(x); }
static real128 r128_cos(real128 x) { return cosl(x); }
static real128 r128_sin(real128 x) { return sinl(x); }
#endif

BruteSeries::BruteSeries(std::uint64_t N) : N_(N) {
    auto primes = oracle_primes(N);
    entries_.reserve(primes.size() + 2048);
    for (std::uint64_t p : primes) {
        std::uint64_t n = p;
        std::uint32_t k = 1;
        while (true) {
            entries_.push_back(
                {std::uint32_t(p), k, r128_log((real128)n)});
            if (n > N / p) break;
            n *= p;
            ++k;
        }
    }
}

void BruteSeries::eval(const itlog::LFunction& L, cplx s, cplx out[3]) const {
    const real128 sr = (real128)s.real();
    const real128 si = (real128)s.imag();
    real128 acc_re[3] = {0, 0, 0}, acc_im[3] = {0, 0, 0};
    for (const Entry& e : entries_) {
        std::complex<double> b = L.b_coeff(e.p, e.k);
        if (b == std::complex<double>(0.0, 0.0)) continue;
        real128 mag = r128_exp(-sr * e.log_n);
        real128 ph = -si * e.log_n;
        real128 c = r128_cos(ph), sn = r128_sin(ph);
        // b * n^{-s}
        real128 tre = ((real128)b.real() * c - (real128)b.imag() * sn) * mag;
        real128 tim = ((real128)b.real() * sn + (real128)b.imag() * c) * mag;
        real128 w = 1;
        for (int m = 0; m < 3; ++m) {
            acc_re[m] += tre * w;
            acc_im[m] += tim * w;
            w /= e.log_n;
        }
    }
    for (int m = 0; m < 3; ++m)
        out[m] = cplx((double)acc_re[m], (double)acc_im[m]);
}

std::vector<cplx> exp_coefficients(const itlog::LFunction& L,
                                   std::uint64_t nmax) {
    std::vector<cplx> a(nmax + 1, cplx(0.0, 0.0));
    if (nmax >= 1) a[1] = 1.0;
    auto primes = oracle_primes(nmax);
    auto is_prime = [&](std::uint64_t n) {
        return std::binary_search(primes.begin(), primes.end(), n);
    };
    // b(d) with d = q^k, or 0 when d is not a prime power
    auto b_of = [&](std::uint64_t d) -> cplx {
        for (std::uint64_t q : primes) {
            if (q * q > d) break;
            if (d % q == 0) {
                std::uint64_t r = d;
                unsigned k = 0;
                while (r % q == 0) { r /= q; ++k; }
                if (r != 1) return cplx(0.0, 0.0);
                return L.b_coeff(q, k);
            }
        }
        return is_prime(d) ? L.b_coeff(d, 1) : cplx(0.0, 0.0);
    };
    for (std::uint64_t n = 2; n <= nmax; ++n) {
        cplx sum(0.0, 0.0);
        for (std::uint64_t d = 2; d <= n; ++d) {
            if (n % d != 0) continue;
            cplx bd = b_of(d);
            if (bd == cplx(0.0, 0.0)) continue;
            sum += bd * std::log(double(d)) * a[n / d];
        }
        a[n] = sum / std::log(double(n));
    }
    return a;
}

double clipped_union_measure(std::vector<std::pair<double, double>> windows,
                             double a, double b) {
    for (auto& w : windows) {
        w.first = std::max(w.first, a);
        w.second = std::min(w.second, b);
    }
    std::erase_if(windows, [](auto& w) { return !(w.second > w.first); });
    std::sort(windows.begin(), windows.end());
    double total = 0.0, cur_lo = 0.0, cur_hi = -1.0;
    bool open = false;
    for (auto& w : windows) {
        if (!open) {
            cur_lo = w.first;
            cur_hi = w.second;
            open = true;
        } else if (w.first <= cur_hi) {
            cur_hi = std::max(cur_hi, w.second);
        } else {
            total += cur_hi - cur_lo;
            cur_lo = w.first;
            cur_hi = w.second;
        }
    }
    if (open) total += cur_hi - cur_lo;
    return total;
}

} // namespace itlog_test
