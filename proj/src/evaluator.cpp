#include "itlog/evaluator.hpp"

#include <cmath>
#include <numbers>

#include "itlog/errors.hpp"
#include "itlog/expint.hpp"
#include "itlog/quadrature.hpp"

namespace itlog {

namespace {

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

// shared engine: sum_{n=p^k <= N} b(p^k) (log n)^{-m} n^{-s}; for m = 0 this
// is the log series, i.e. the m-fold integrand family collapses to one sum
std::pair<cplx, double> coefficient_sum(const LFunction& L, int m, cplx s,
                                        std::uint64_t N) {
    auto pps = shared_prime_powers(N);
    Kahan acc;
    double abs_acc = 0.0, phase_acc = 0.0;
    for (const auto& pp : *pps) {
        if (pp.n > N) break;
        cplx b = L.b_coeff(pp.p, pp.k);
        if (b == cplx(0.0, 0.0)) continue;
        cplx term = b * std::exp(-s * pp.log_n) / std::pow(pp.log_n, m);
        acc.add(term);
        abs_acc += std::abs(term);
        phase_acc += std::abs(term) * pp.log_n;
    }
    // 2nd term: rounding of the phase Im(s) * log(n) in each exponential
    return {acc.sum, 4e-16 * abs_acc +
                         2.3e-16 * std::fabs(s.imag()) * phase_acc};
}

// rigorous tail majorant: |b(p^k)| <= C p^{k theta} gives termwise
// C n^{theta - sigma} (log n)^{-m}, summed by integral comparison from N
double series_tail_bound(const LFunction& L, int m, double sigma,
                         std::uint64_t N) {
    if (L.kind() == LFunction::Kind::coeff_file &&
        N >= L.coeff_support_bound())
        return 0.0; // the file's series terminates inside the partial sum
    double lambda = sigma - L.theta() - 1.0;
    return L.ramanujan_C() *
           log_power_tail(lambda, std::log(double(N)), m);
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

// ---- LogTracker -------------------------------------------------------------

LogTracker::LogTracker(const LFunction& L, double t, EvalOptions opts)
    : L_(&L), t_(t), opts_(opts), backend_(make_fixed_t_backend(L, t)) {
    if (opts_.anchor_sigma < opts_.sigma_c) opts_.anchor_sigma = opts_.sigma_c;
    powers_ = shared_prime_powers(opts_.series_N);
    auto [v, e] = series_log(opts_.anchor_sigma);
    anchors_.emplace(opts_.anchor_sigma, std::make_pair(v, e));
}

std::pair<cplx, double> LogTracker::series_log(double sigma) const {
    // log L = sum b(p^k) n^{-s}; absolutely convergent here, and continuous
    // in sigma with limit 0 at +infinity, hence *the* branch from the right
    Kahan acc;
    double abs_acc = 0.0;
    for (const auto& pp : *powers_) {
        cplx b = L_->b_coeff(pp.p, pp.k);
        if (b == cplx(0.0, 0.0)) continue;
        double mag = std::exp(-sigma * pp.log_n);
        double ph = -t_ * pp.log_n;
        acc.add(b * mag * cplx(std::cos(ph), std::sin(ph)));
        abs_acc += std::abs(b) * mag;
    }
    double tail = series_tail_bound(*L_, 0, sigma, powers_->back().n);
    return {acc.sum, tail + 4e-16 * abs_acc};
}

ApproxValue LogTracker::eval_L_at(double sigma) const {
    return fixed_t_eval(backend_, sigma);
}

void LogTracker::walk_down_to(double target) {
    if (L_->kind() == LFunction::Kind::coeff_file &&
        target <= backend_min_sigma(*L_))
        throw unsupported_region_error(
            "file-backed L-functions cannot be continued to Re s <= 1.05");
    if (t_ == 0.0 && L_->has_pole_at_one() && target <= 1.0)
        throw pole_error(
            "the horizontal path at t = 0 crosses the pole at s = 1");

    // start from the nearest anchor above target (keys are descending, so
    // lower_bound yields the first key <= target; its predecessor is the
    // smallest key above).  The top anchor always exists.
    auto below = anchors_.lower_bound(target);
    if (below == anchors_.begin())
        throw numeric_error("tracker invariant violation: no anchor above");
    auto from = std::prev(below);
    double cur_sigma = from->first;
    cplx cur_log = from->second.first;

    const double twopi = 2.0 * std::numbers::pi;
    double h = std::min(0.1, std::max(opts_.min_step, cur_sigma - target));
    while (cur_sigma > target) {
        double next = std::max(target, cur_sigma - h);
        ApproxValue Lv = eval_L_at(next);
        double mag = std::abs(Lv.value);
        if (mag < opts_.zero_threshold)
            throw zero_on_path_error(
                "|L| below threshold on the continuation path (inadmissible "
                "shift)");
        cplx principal = std::log(Lv.value);
        double k = std::round((cur_log.imag() - principal.imag()) / twopi);
        cplx cand = principal + cplx(0.0, k * twopi);
        cplx delta = cand - cur_log;
        if (std::abs(delta.imag()) < 0.5 * std::numbers::pi &&
            std::abs(delta) < 0.5) {
            double err = Lv.err_bound / std::max(mag, 1e-300);
            anchors_.emplace(next, std::make_pair(cand, err));
            cur_sigma = next;
            cur_log = cand;
            h = std::min(h * 1.6, 0.25);
        } else {
            h *= 0.5;
            if (h < opts_.min_step) {
                // distinguish a zero pinching the path from a genuine
                // stepping failure: the former is an inadmissible shift
                if (mag < 1e-6)
                    throw zero_on_path_error(
                        "|L| collapses on the continuation path "
                        "(inadmissible shift)");
                throw continuation_error(
                    "continuation step size underflowed before the "
                    "argument-change bound could be met");
            }
        }
    }
}

ApproxValue LogTracker::log_at(double sigma) {
    ApproxValue out;
    out.method = Method::continuation;
    if (sigma >= opts_.anchor_sigma) {
        auto [v, e] = series_log(sigma);
        out.value = v;
        out.err_bound = e;
        out.method = Method::series;
        return out;
    }
    auto it = anchors_.find(sigma);
    if (it == anchors_.end()) {
        walk_down_to(sigma); // lands exactly on sigma and anchors it
        it = anchors_.find(sigma);
        if (it == anchors_.end())
            throw numeric_error("tracker invariant violation: walk missed");
    }
    out.value = it->second.first;
    out.err_bound = it->second.second;
    return out;
}

// ---- free functions -----------------------------------------------------------

ApproxValue eval_L(const LFunction& L, cplx s) {
    switch (L.kind()) {
        case LFunction::Kind::zeta:
            return zeta_em(s);
        case LFunction::Kind::dirichlet: {
            FixedTDirichlet fixed(*L.character(), s.imag());
            return fixed.eval(s.real());
        }
        case LFunction::Kind::coeff_file: {
            FixedTCustom fixed(L, s.imag());
            return fixed.eval(s.real());
        }
    }
    throw numeric_error("unreachable backend kind");
}

ApproxValue log_L_tracked(const LFunction& L, double sigma, double t,
                          double sigma_start, EvalOptions opts) {
    if (!(sigma_start > 1.05))
        throw validation_error(
            "log_L_tracked: sigma_start must exceed 1 + delta (got " +
            std::to_string(sigma_start) + ")");
    // anchoring farther right never changes the branch, only improves the
    // series accuracy, so the internal anchor is max(sigma_start, default)
    opts.anchor_sigma = std::max(opts.anchor_sigma, sigma_start);
    LogTracker tracker(L, t, opts);
    return tracker.log_at(sigma);
}

ApproxValue eval_Hm_series(const LFunction& L, int m, cplx s,
                           std::uint64_t N) {
    if (m < 0) throw validation_error("eval_Hm_series: m must be >= 0");
    if (N < 2) throw validation_error("eval_Hm_series: N must be >= 2");
    if (!(s.real() > 1.0))
        throw unsupported_region_error(
            "eval_Hm_series requires Re s > 1 (absolute convergence)");
    auto [v, round_err] = coefficient_sum(L, m, s, N);
    ApproxValue out;
    out.value = v;
    out.err_bound = series_tail_bound(L, m, s.real(), N) + round_err;
    out.method = Method::series;
    return out;
}

ApproxValue eval_Hm(const LFunction& L, int m, cplx s, EvalOptions opts,
                    LogTracker* shared_tracker) {
    if (m < 0) throw validation_error("eval_Hm: m must be >= 0");
    double sigma = s.real(), t = s.imag();
    if (t == 0.0 && L.has_pole_at_one() && sigma <= 1.0)
        throw pole_error("eval_Hm: the ray [sigma, infinity) at t = 0 "
                         "crosses the pole at s = 1");

    // keep one tracker per horizontal line
    std::unique_ptr<LogTracker> own;
    LogTracker* tracker = shared_tracker;
    if (tracker && tracker->t() != t) tracker = nullptr;
    if (!tracker && (m == 0 || sigma < opts.sigma_c)) {
        own = std::make_unique<LogTracker>(L, t, opts);
        tracker = own.get();
    }

    if (m == 0) {
        ApproxValue out = tracker->log_at(sigma);
        out.method = Method::continuation;
        return out;
    }

    ApproxValue out;
    out.method = Method::collapsed_integral;
    double sigma_c = opts.sigma_c;
    cplx upper{0.0, 0.0};
    double upper_err = 0.0;
    if (sigma >= sigma_c) {
        // entirely in the termwise zone
        auto [v, round_err] = coefficient_sum(L, m, s, opts.series_N);
        out.value = v;
        out.err_bound = series_tail_bound(L, m, sigma, opts.series_N) +
                        round_err;
        return out;
    }
    // termwise upper piece: integrating the series over [sigma_c, inf)
    // against (alpha-sigma)^{m-1}/(m-1)! collapses, via the incomplete gamma
    // identity, to sum_{j<m} (sigma_c-sigma)^j/j! * H_{m-j}(sigma_c + it)
    for (int j = 0; j < m; ++j) {
        auto [v, round_err] =
            coefficient_sum(L, m - j, cplx(sigma_c, t), opts.series_N);
        double w = std::pow(sigma_c - sigma, j) / factorial(j);
        upper += w * v;
        upper_err +=
            w * (series_tail_bound(L, m - j, sigma_c, opts.series_N) +
                 round_err);
    }
    // quadrature piece on [sigma, sigma_c]
    double node_err_max = 0.0;
    auto integrand = [&](double alpha) -> cplx {
        ApproxValue lg = tracker->log_at(alpha);
        node_err_max = std::max(node_err_max, lg.err_bound);
        return std::pow(alpha - sigma, m - 1) * lg.value;
    };
    QuadResult q = integrate_gk(integrand, sigma, sigma_c,
                                opts.quad_tol * factorial(m - 1),
                                opts.max_quad_panels);
    double fm1 = factorial(m - 1);
    out.value = q.value / fm1 + upper;
    // node errors integrate against the kernel: bounded by max_err * width^m/m!
    double node_err =
        node_err_max * std::pow(sigma_c - sigma, m) / (fm1 * double(m));
    out.err_bound = q.err_estimate / fm1 + node_err + upper_err;
    return out;
}

cplx dirichlet_poly(const LFunction& L, int m, cplx s, double y) {
    if (m < 0) throw validation_error("dirichlet_poly: m must be >= 0");
    if (!(y >= 2.0)) throw validation_error("dirichlet_poly: y must be >= 2");
    auto [v, err] = coefficient_sum(L, m, s, static_cast<std::uint64_t>(y));
    (void)err;
    return v;
}

double poly_error_envelope(double sigma3, double sigma4, double y, double T,
                           double C) {
    if (!(sigma3 < sigma4) || !(sigma4 <= 1.0))
        throw validation_error(
            "poly_error_envelope: need sigma3 < sigma4 <= 1");
    if (!(y >= 2.0))
        throw validation_error("poly_error_envelope: need y >= 2");
    if (!(T >= y + 3.0))
        throw validation_error("poly_error_envelope: need T >= y + 3");
    if (!(C > 0.0))
        throw validation_error("poly_error_envelope: need C > 0");
    double lt = std::log(T);
    return C * std::pow(y, sigma3 - sigma4) * lt * lt * lt;
}

} // namespace itlog
