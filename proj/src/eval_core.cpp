#include "itlog/eval_core.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include "itlog/errors.hpp"
#include "itlog/expint.hpp"

namespace itlog {

namespace {

constexpr int kMaxBernoulli = 60;
constexpr double kCustomDelta = 0.05; // file-backed L reachable for sigma > 1+delta

// Kahan-compensated complex accumulator.
struct Kahan {
    cplx sum{0.0, 0.0};
    cplx c{0.0, 0.0};
    void add(cplx x) {
        cplx y = x - c;
        cplx t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

double zeta_even_longdouble(int two_k) {
    // Truncated series plus Euler-Maclaurin tail; the bare series would need
    // ~1e19 terms for two_k == 2, while with the tail corrections M = 1000
    // leaves a remainder below 1e-22 even in the worst case.
    const long double M = 1000.0L;
    long double s = 0.0L;
    for (int n = 1; n < 1000; ++n)
        s += powl((long double)n, -(long double)two_k);
    long double a = (long double)two_k;
    long double Mpow = powl(M, 1.0L - a); // M^{1-2k}
    s += Mpow / (a - 1.0L);
    Mpow /= M; // M^{-2k}
    s += 0.5L * Mpow;
    Mpow /= M; // M^{-2k-1}
    s += (a / 12.0L) * Mpow;
    Mpow /= M * M; // M^{-2k-3}
    s -= (a * (a + 1.0L) * (a + 2.0L) / 720.0L) * Mpow;
    return (double)s;
}

} // namespace

const std::vector<double>& em_bernoulli_factors() {
    static std::vector<double> table = [] {
        std::vector<double> t(kMaxBernoulli + 1, 0.0);
        const double two_pi = 2.0 * std::numbers::pi;
        double sign = 1.0; // (-1)^{k+1}
        double pw = 1.0;   // (2 pi)^{-2k}, built incrementally
        for (int k = 1; k <= kMaxBernoulli; ++k) {
            pw /= two_pi * two_pi;
            t[k] = sign * 2.0 * zeta_even_longdouble(2 * k) * pw;
            sign = -sign;
        }
        return t;
    }();
    return table;
}

int em_N_for_t(double t) {
    double at = std::fabs(t);
    int N = static_cast<int>(std::ceil(0.32 * at)) + 48;
    return N;
}

std::pair<cplx, double> em_completion(cplx s, double y) {
    const auto& bern = em_bernoulli_factors();
    double logy = std::log(y);
    cplx y_ms = std::exp(-s * logy); // y^{-s}
    cplx value = y * y_ms / (s - 1.0) + 0.5 * y_ms;

    // Bernoulli corrections: term_k = B_{2k}/(2k)! * (s)_{2k-1} * y^{-s-2k+1}
    cplx poch = s;          // (s)_1
    cplx ypow = y_ms * y;   // y^{-s+1}
    double err = 0.0;
    cplx corr{0.0, 0.0};
    double prev_mag = std::numeric_limits<double>::infinity();
    bool done = false;
    for (int k = 1; k <= kMaxBernoulli; ++k) {
        ypow /= y * y; // y^{-s-2k+1}
        cplx term = bern[k] * poch * ypow;
        double mag = std::abs(term);
        if (mag > prev_mag) {
            // divergent zone of the asymptotic series: stop before this term
            // and charge it as the remainder
            err = mag * std::abs(s + 2.0 * double(k) - 1.0) /
                  std::max(1e-300, s.real() + 2.0 * double(k) - 1.0);
            done = true;
            break;
        }
        corr += term;
        prev_mag = mag;
        // remainder bound uses the *next* term; build it provisionally
        poch *= (s + 2.0 * double(k) - 1.0) * (s + 2.0 * double(k));
        cplx next = bern[std::min(k + 1, kMaxBernoulli)] * poch * ypow /
                    (y * y);
        double nmag = std::abs(next);
        double denom = s.real() + 2.0 * double(k) + 1.0;
        if (denom <= 0.0) continue; // validity needs sigma+2k+1 > 0; keep going
        double bound = nmag * std::abs(s + 2.0 * double(k) + 1.0) / denom;
        if (bound < 1e-16 * (1.0 + std::abs(value + corr))) {
            err = bound;
            done = true;
            break;
        }
        err = bound;
    }
    if (!done) {
        // ran out of table; err holds the last computed bound
    }
    return {value + corr, err};
}

cplx expm1_over_w(cplx w) {
    if (std::abs(w) > 0.5) return (std::exp(w) - 1.0) / w;
    // series 1 + w/2 + w^2/6 + ... ; |w| <= 1/2 gives ~1e-18 by degree 14
    cplx term{1.0, 0.0};
    cplx sum{1.0, 0.0};
    for (int k = 2; k <= 16; ++k) {
        term *= w / double(k);
        sum += term;
    }
    return sum;
}

cplx em_pole_term_reduced(cplx s, double y) {
    // (y^{1-s} - 1)/(s-1) = -log(y) * expm1_over_w((1-s) log y)
    double logy = std::log(y);
    return -logy * expm1_over_w((1.0 - s) * logy);
}

ApproxValue zeta_em(cplx s) {
    if (std::abs(s - 1.0) < 1e-8)
        throw pole_error("zeta evaluated too close to the pole at s=1");
    int N = em_N_for_t(s.imag());
    Kahan acc;
    double abs_acc = 0.0, phase_acc = 0.0;
    for (int n = 2; n < N; ++n) {
        double logn = std::log(double(n));
        cplx term = std::exp(-s * logn);
        acc.add(term);
        abs_acc += std::abs(term);
        phase_acc += std::abs(term) * logn;
    }
    acc.add(cplx{1.0, 0.0}); // n = 1
    abs_acc += 1.0;
    auto [tail, rem] = em_completion(s, double(N));
    ApproxValue out;
    out.value = acc.sum + tail;
    // second error term: rounding of the phase t*log(n) (about 2 ulp of a
    // quantity of size |t| log n) dominates for large |t|
    out.err_bound = rem + 4e-16 * (abs_acc + std::abs(tail)) +
                    2.3e-16 * std::fabs(s.imag()) * phase_acc;
    out.method = Method::continuation;
    return out;
}

ApproxValue hurwitz_em(cplx s, double x) {
    if (!(x > 0.0 && x <= 1.0))
        throw validation_error("hurwitz_em: shift x must lie in (0,1]");
    if (std::abs(s - 1.0) < 1e-8)
        throw pole_error("hurwitz zeta evaluated too close to the pole at s=1");
    int N = em_N_for_t(s.imag());
    Kahan acc;
    double abs_acc = 0.0, phase_acc = 0.0;
    for (int n = 0; n < N; ++n) {
        double logn = std::log(double(n) + x);
        cplx term = std::exp(-s * logn);
        acc.add(term);
        abs_acc += std::abs(term);
        phase_acc += std::abs(term) * std::fabs(logn);
    }
    auto [tail, rem] = em_completion(s, double(N) + x);
    ApproxValue out;
    out.value = acc.sum + tail;
    out.err_bound = rem + 4e-16 * (abs_acc + std::abs(tail)) +
                    2.3e-16 * std::fabs(s.imag()) * phase_acc;
    out.method = Method::continuation;
    return out;
}

// ---- FixedTZeta ---------------------------------------------------------------

FixedTZeta::FixedTZeta(double t) : t_(t), N_(em_N_for_t(t)) {
    logn_.resize(N_);
    nit_.resize(N_);
    for (int n = 1; n < N_; ++n) {
        logn_[n] = std::log(double(n));
        double ph = -t_ * logn_[n];
        nit_[n] = {std::cos(ph), std::sin(ph)};
    }
}

ApproxValue FixedTZeta::eval(double sigma) const {
    cplx s(sigma, t_);
    if (std::abs(s - 1.0) < 1e-8)
        throw pole_error("zeta evaluated too close to the pole at s=1");
    Kahan acc;
    double abs_acc = 0.0, phase_acc = 0.0;
    for (int n = 1; n < N_; ++n) {
        double mag = std::exp(-sigma * logn_[n]);
        acc.add(mag * nit_[n]);
        abs_acc += mag;
        phase_acc += mag * logn_[n];
    }
    auto [tail, rem] = em_completion(s, double(N_));
    ApproxValue out;
    out.value = acc.sum + tail;
    out.err_bound = rem + 4e-16 * (abs_acc + std::abs(tail)) +
                    2.3e-16 * std::fabs(t_) * phase_acc;
    out.method = Method::continuation;
    return out;
}

// ---- FixedTDirichlet ------------------------------------------------------------

FixedTDirichlet::FixedTDirichlet(const DirichletCharacter& chi, double t)
    : chi_(chi), t_(t), N_(em_N_for_t(t)) {
    std::uint64_t q = chi_.modulus();
    for (std::uint64_t a = 1; a <= q; ++a) {
        cplx ca = chi_(a);
        if (ca == cplx(0.0, 0.0)) continue;
        Residue r;
        r.chi_a = ca;
        r.x = double(a) / double(q);
        r.logy.resize(N_);
        r.yit.resize(N_);
        for (int n = 0; n < N_; ++n) {
            r.logy[n] = std::log(double(n) + r.x);
            double ph = -t_ * r.logy[n];
            r.yit[n] = {std::cos(ph), std::sin(ph)};
        }
        r.log_ycomp = std::log(double(N_) + r.x);
        double ph = -t_ * r.log_ycomp;
        r.ycomp_it = {std::cos(ph), std::sin(ph)};
        residues_.push_back(std::move(r));
    }
}

ApproxValue FixedTDirichlet::eval(double sigma) const {
    // L(s,chi) = q^{-s} sum_a chi(a) zeta(s, a/q); the pole terms are summed
    // in the reduced form since sum_a chi(a) = 0 for non-principal chi.
    cplx s(sigma, t_);
    std::uint64_t q = chi_.modulus();
    Kahan acc;
    double abs_acc = 0.0, phase_acc = 0.0;
    double rem_total = 0.0;
    const auto& bern = em_bernoulli_factors();
    for (const auto& r : residues_) {
        Kahan part;
        for (int n = 0; n < N_; ++n) {
            double mag = std::exp(-sigma * r.logy[n]);
            part.add(mag * r.yit[n]);
            abs_acc += mag;
            phase_acc += mag * std::fabs(r.logy[n]);
        }
        double y = double(N_) + r.x;
        // reduced pole term + half term + Bernoulli corrections
        cplx y_ms = std::exp(-sigma * r.log_ycomp) * r.ycomp_it; // y^{-s}
        cplx completion = em_pole_term_reduced(s, y) + 0.5 * y_ms;
        cplx poch = s;
        cplx ypow = y_ms * y;
        double prev_mag = std::numeric_limits<double>::infinity();
        double rem = 0.0;
        for (int k = 1; k <= kMaxBernoulli; ++k) {
            ypow /= y * y;
            cplx term = bern[k] * poch * ypow;
            double mag = std::abs(term);
            if (mag > prev_mag) { rem = mag; break; }
            completion += term;
            prev_mag = mag;
            poch *= (s + 2.0 * double(k) - 1.0) * (s + 2.0 * double(k));
            rem = std::abs(bern[std::min(k + 1, kMaxBernoulli)] * poch * ypow /
                           (y * y));
            double denom = sigma + 2.0 * double(k) + 1.0;
            if (denom > 0.0)
                rem *= std::abs(s + 2.0 * double(k) + 1.0) / denom;
            if (rem < 1e-17 * (1.0 + std::abs(completion))) break;
        }
        acc.add(r.chi_a * (part.sum + completion));
        rem_total += rem;
    }
    cplx q_ms = std::exp(-s * std::log(double(q)));
    ApproxValue out;
    out.value = q_ms * acc.sum;
    out.err_bound =
        std::abs(q_ms) * (rem_total + 4e-16 * (abs_acc + std::abs(acc.sum)) +
                          2.3e-16 * std::fabs(t_) * phase_acc);
    out.method = Method::continuation;
    return out;
}

// ---- FixedTCustom ----------------------------------------------------------------

FixedTCustom::FixedTCustom(const LFunction& L, double t) : L_(&L), t_(t) {
    auto pps = shared_prime_powers(std::max<std::uint64_t>(
        L.coeff_support_bound(), 2));
    for (const auto& pp : *pps) {
        cplx b = L.b_coeff(pp.p, pp.k);
        if (b == cplx(0.0, 0.0)) continue;
        double ph = -t_ * pp.log_n;
        terms_.push_back({b, pp.log_n, {std::cos(ph), std::sin(ph)}});
    }
}

ApproxValue FixedTCustom::log_eval(double sigma) const {
    if (sigma <= 1.0 + kCustomDelta)
        throw unsupported_region_error(
            "file-backed L-functions are only evaluated for Re s > 1.05");
    Kahan acc;
    double abs_acc = 0.0, phase_acc = 0.0;
    for (const auto& tm : terms_) {
        double mag = std::exp(-sigma * tm.logn);
        acc.add(tm.b * mag * tm.nit);
        abs_acc += std::abs(tm.b) * mag;
        phase_acc += std::abs(tm.b) * mag * tm.logn;
    }
    ApproxValue out;
    out.value = acc.sum;
    // the file support is the whole series, so only rounding remains
    out.err_bound = 4e-16 * abs_acc + 2.3e-16 * std::fabs(t_) * phase_acc;
    out.method = Method::series;
    return out;
}

ApproxValue FixedTCustom::eval(double sigma) const {
    ApproxValue lg = log_eval(sigma);
    ApproxValue out;
    out.value = std::exp(lg.value);
    out.err_bound = std::abs(out.value) * lg.err_bound * 1.5;
    out.method = Method::series;
    return out;
}

FixedTBackend make_fixed_t_backend(const LFunction& L, double t) {
    switch (L.kind()) {
        case LFunction::Kind::zeta: return FixedTZeta(t);
        case LFunction::Kind::dirichlet:
            return FixedTDirichlet(*L.character(), t);
        case LFunction::Kind::coeff_file: return FixedTCustom(L, t);
    }
    throw numeric_error("unreachable backend kind");
}

ApproxValue fixed_t_eval(const FixedTBackend& b, double sigma) {
    return std::visit([&](const auto& be) { return be.eval(sigma); }, b);
}

double backend_min_sigma(const LFunction& L) {
    return L.kind() == LFunction::Kind::coeff_file
               ? 1.0 + kCustomDelta
               : -std::numeric_limits<double>::infinity();
}

} // namespace itlog
