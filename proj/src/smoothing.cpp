#include "itlog/smoothing.hpp"

#include <cmath>

#include "itlog/errors.hpp"
#include "itlog/eval_core.hpp"
#include "itlog/quadrature.hpp"

namespace itlog {

namespace {
double h(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
} // namespace

double bump(double x) {
    if (x < 0.0) throw validation_error("bump: x must be >= 0");
    if (x <= 1.0) return 1.0;
    if (x >= 2.0) return 0.0;
    double a = h(2.0 - x), b = h(x - 1.0);
    return a / (a + b);
}

double bump_derivative(double x) {
    if (x < 0.0) throw validation_error("bump_derivative: x must be >= 0");
    if (x <= 1.0 || x >= 2.0) return 0.0;
    // phi = A/(A+B), A = h(2-x), B = h(x-1):
    // A' = -A/(2-x)^2, B' = B/(x-1)^2, phi' = (A'B - AB')/(A+B)^2
    double u = 2.0 - x, v = x - 1.0;
    double A = h(u), B = h(v);
    double Ap = -A / (u * u), Bp = B / (v * v);
    double denom = (A + B) * (A + B);
    return (Ap * B - A * Bp) / denom;
}

ApproxValue mellin_hat(std::complex<double> s) {
    if (std::abs(s) < 1e-12)
        throw pole_error("mellin_hat has a simple pole at s = 0");
    if (!(s.real() > -1.0))
        throw validation_error("mellin_hat: requires Re s > -1");
    // -(1/s) * int_1^2 bump'(x) x^s dx ; bump' is C^inf with flat endpoints
    auto f = [&](double x) -> std::complex<double> {
        return bump_derivative(x) * std::exp(s * std::log(x));
    };
    // resolve the oscillation scale |Im s| with a panel budget to match
    int panels = 2000 + static_cast<int>(4.0 * std::abs(s.imag()));
    QuadResult q = integrate_gk(f, 1.0, 2.0, 1e-12, panels);
    ApproxValue out;
    out.value = -q.value / s;
    out.err_bound = q.err_estimate / std::abs(s) + 1e-15;
    out.method = Method::smoothed;
    return out;
}

std::complex<double> smoothed_sum(const LFunction& L, int m,
                                  std::complex<double> s, double X) {
    if (m < 0) throw validation_error("smoothed_sum: m must be >= 0");
    if (!(X >= 2.0)) throw validation_error("smoothed_sum: X must be >= 2");
    auto pps = shared_prime_powers(static_cast<std::uint64_t>(2.0 * X));
    std::complex<double> acc{0.0, 0.0};
    for (const auto& pp : *pps) {
        double ratio = double(pp.n) / X;
        if (ratio >= 2.0) break; // table is ascending in n
        cplx b = L.b_coeff(pp.p, pp.k);
        if (b == cplx(0.0, 0.0)) continue;
        double w = bump(ratio);
        if (w == 0.0) continue;
        acc += b * w * std::exp(-s * pp.log_n) / std::pow(pp.log_n, m);
    }
    return acc;
}

} // namespace itlog
