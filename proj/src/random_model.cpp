#include "itlog/random_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "itlog/errors.hpp"
#include "itlog/eval_core.hpp"
#include "itlog/expint.hpp"

namespace itlog {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

namespace {

// phase deviate in [0,1) for (seed, p): two finalizer rounds decorrelate the
// lattice structure of consecutive primes
double uniform01(std::uint64_t seed, std::uint64_t p) {
    std::uint64_t z = splitmix64(splitmix64(p) ^ seed);
    return double(z >> 11) * 0x1.0p-53;
}

} // namespace

std::complex<double> PhaseAssignment::phase_of(std::uint64_t p) const {
    auto it = std::lower_bound(primes.begin(), primes.end(), p);
    if (it == primes.end() || *it != p)
        throw validation_error("phase assignment has no entry for prime " +
                               std::to_string(p));
    return phases[std::size_t(it - primes.begin())];
}

bool PhaseAssignment::has_prime(std::uint64_t p) const {
    auto it = std::lower_bound(primes.begin(), primes.end(), p);
    return it != primes.end() && *it == p;
}

PhaseAssignment sample_phases(std::uint64_t seed, std::uint64_t prime_bound) {
    if (prime_bound < 2)
        throw validation_error("sample_phases: prime_bound must be >= 2");
    PhaseAssignment w;
    w.prime_bound = prime_bound;
    w.seed = seed;
    auto table = shared_prime_table(prime_bound);
    for (std::uint64_t p : table->primes()) {
        if (p > prime_bound) break;
        double u = uniform01(seed, p);
        double ang = 2.0 * std::numbers::pi * u;
        w.primes.push_back(p);
        w.phases.emplace_back(std::cos(ang), std::sin(ang));
    }
    return w;
}

PhaseAssignment unit_phases(std::uint64_t prime_bound) {
    PhaseAssignment w = sample_phases(0, prime_bound);
    std::fill(w.phases.begin(), w.phases.end(),
              std::complex<double>(1.0, 0.0));
    w.counter_scheme = "constant-1";
    return w;
}

std::complex<double> omega_at(const PhaseAssignment& w, std::uint64_t n) {
    if (n == 0) throw validation_error("omega_at: n must be >= 1");
    std::complex<double> out{1.0, 0.0};
    std::uint64_t rest = n;
    for (std::uint64_t d = 2; d * d <= rest; d += (d == 2) ? 1 : 2) {
        if (rest % d) continue;
        unsigned e = 0;
        while (rest % d == 0) { rest /= d; ++e; }
        std::complex<double> zp = w.phase_of(d);
        for (unsigned i = 0; i < e; ++i) out *= zp;
    }
    if (rest > 1) out *= w.phase_of(rest);
    return out;
}

std::complex<double> local_factor_g(const LFunction& L, int m,
                                    std::complex<double> s,
                                    std::complex<double> z, std::uint64_t p) {
    if (std::abs(std::abs(z) - 1.0) > 1e-9)
        throw validation_error("local_factor_g: |z| must equal 1");
    double sigma = s.real();
    if (!(sigma > L.theta()))
        throw numeric_error(
            "local_factor_g diverges for Re s <= theta");
    double logp = std::log(double(p));
    // |term_k| <= C p^{k(theta-sigma)} / (k log p)^m: geometric with ratio
    // r = p^{theta-sigma}; stop when the remaining geometric tail < 1e-14
    double r = std::pow(double(p), L.theta() - sigma);
    std::complex<double> acc{0.0, 0.0};
    std::complex<double> zk{1.0, 0.0};
    cplx ps = std::exp(-s * logp); // p^{-s}
    cplx pks{1.0, 0.0};
    double mag_bound = L.ramanujan_C() * r; // bound for |b(p^k) p^{-ks}| at k
    for (int k = 1; k <= 4000; ++k) {
        zk *= z;
        pks *= ps;
        cplx b = L.b_coeff(p, unsigned(k));
        if (b != cplx(0.0, 0.0))
            acc += b * zk * pks / std::pow(double(k) * logp, m);
        double tail = mag_bound * r / (1.0 - r) /
                      std::pow(double(k + 1) * logp, m);
        if (tail < 1e-14) break;
        mag_bound *= r;
    }
    return acc;
}

ApproxValue eval_random_Hm(const LFunction& L, int m, std::complex<double> s,
                           const PhaseAssignment& w, int Kmax) {
    if (m < 0) throw validation_error("eval_random_Hm: m must be >= 0");
    double sigma = s.real();
    if (sigma <= 0.5)
        throw unsupported_region_error(
            "eval_random_Hm requires Re s > 1/2 (L^2 convergence threshold)");
    double logbound = std::log(double(w.prime_bound));
    std::complex<double> acc{0.0, 0.0};
    std::complex<double> comp{0.0, 0.0}; // Kahan compensation
    for (std::size_t i = 0; i < w.primes.size(); ++i) {
        std::uint64_t p = w.primes[i];
        double logp = std::log(double(p));
        cplx z = w.phases[i];
        cplx ps = std::exp(-s * logp);
        cplx zk = z, pks = ps;
        cplx local{0.0, 0.0};
        int kcap = std::max(1, std::min<int>(Kmax, int(logbound / logp) + 2));
        for (int k = 1; k <= kcap; ++k) {
            if (k > 1) { zk *= z; pks *= ps; }
            cplx b = L.b_coeff(p, unsigned(k));
            if (b != cplx(0.0, 0.0))
                local += b * zk * pks / std::pow(double(k) * logp, m);
            if (std::abs(pks) * L.ramanujan_C() *
                    std::pow(double(p), L.theta() * k) <
                1e-16)
                break;
        }
        cplx y = local - comp;
        cplx t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    ApproxValue out;
    out.value = acc;
    out.err_bound = random_tail_rms(L, m, sigma, w.prime_bound);
    out.method = Method::series;
    return out;
}

double random_tail_rms(const LFunction& L, int m, double sigma,
                       std::uint64_t prime_bound) {
    // RMS of the omitted primes under the product measure; memoized since
    // Monte-Carlo sampling calls this once per draw with fixed parameters
    struct Key {
        std::string name;
        int m;
        double sigma;
        std::uint64_t bound;
        bool operator<(const Key& o) const {
            return std::tie(name, m, sigma, bound) <
                   std::tie(o.name, o.m, o.sigma, o.bound);
        }
    };
    static std::mutex mu;
    static std::map<Key, double> memo;
    Key key{L.name(), m, sigma, prime_bound};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    double tail_var =
        analytic_second_moment(L, m, sigma) -
        analytic_second_moment_truncated(L, m, sigma, prime_bound);
    double rms = std::sqrt(std::max(0.0, tail_var));
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(key, rms);
    return rms;
}

namespace {

double second_moment_partial(const LFunction& L, int m, double sigma,
                             std::uint64_t N, std::uint64_t prime_cap) {
    auto pps = shared_prime_powers(N);
    double acc = 0.0, comp = 0.0;
    for (const auto& pp : *pps) {
        if (prime_cap && pp.p > prime_cap) continue;
        cplx b = L.b_coeff(pp.p, pp.k);
        if (b == cplx(0.0, 0.0)) continue;
        // |Lambda(n)|^2/(log n)^{2m+2} = |b|^2 (log n)^{-2m}
        double term = std::norm(b) * std::exp(-2.0 * sigma * pp.log_n) /
                      std::pow(pp.log_n, 2 * m);
        double y = term - comp;
        double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    return acc;
}

} // namespace

double analytic_second_moment(const LFunction& L, int m, double sigma) {
    if (!(sigma > 0.5))
        throw numeric_error(
            "analytic_second_moment diverges for sigma <= 1/2");
    // adaptive truncation: the majorant C^2 n^{2 theta - 2 sigma} (log n)^{-2m}
    // integrates to the same closed form as the series tail
    std::uint64_t N = 100000;
    double value = 0.0;
    for (;;) {
        value = second_moment_partial(L, m, sigma, N, 0);
        double lambda = 2.0 * sigma - 2.0 * L.theta() - 1.0;
        double tail = L.ramanujan_C() * L.ramanujan_C() *
                      log_power_tail(lambda, std::log(double(N)), 2 * m);
        if (L.kind() == LFunction::Kind::coeff_file &&
            N >= L.coeff_support_bound())
            tail = 0.0;
        if (tail < std::max(1e-12, 1e-10 * value) || N >= 6400000) break;
        N *= 4;
    }
    return value;
}

double analytic_second_moment_truncated(const LFunction& L, int m,
                                        double sigma,
                                        std::uint64_t prime_bound) {
    if (!(sigma > 0.5))
        throw numeric_error(
            "analytic_second_moment diverges for sigma <= 1/2");
    // prime powers p^k with p <= prime_bound but p^k arbitrarily large still
    // contribute; k >= 2 beyond the table is below 1e-18 at these sigmas, so
    // the table bound doubles as the power cap
    std::uint64_t N = std::max<std::uint64_t>(prime_bound, 100000);
    return second_moment_partial(L, m, sigma, N, prime_bound);
}

// ---- phase fitting ---------------------------------------------------------------

PhaseFitResult phase_fit(const LFunction& L, int m, const Polynomial& target,
                         const CompactSetContext& K, std::uint64_t prime_bound,
                         int sweeps, int circle_grid, int rect_grid,
                         int disk_boundary) {
    if (prime_bound < 2)
        throw validation_error("phase_fit: prime_bound must be >= 2");
    if (sweeps < 1) throw validation_error("phase_fit: sweeps must be >= 1");
    if (circle_grid < 2)
        throw validation_error("phase_fit: circle grid must be >= 2");

    auto pts = K.grid(rect_grid, disk_boundary);
    const std::size_t J = pts.size();
    std::vector<cplx> target_vals(J);
    for (std::size_t j = 0; j < J; ++j) target_vals[j] = target.eval(pts[j]);

    // per-prime basis: g_p(s_j, z) = sum_k c[p][k][j] z^k
    PhaseAssignment w = unit_phases(prime_bound);
    w.counter_scheme = "fitted";
    const std::size_t P = w.primes.size();
    double logbound = std::log(double(prime_bound));
    struct Basis {
        int K;                   // powers used
        std::vector<cplx> c;     // K x J, c[(k-1)*J + j]
    };
    std::vector<Basis> basis(P);
    for (std::size_t i = 0; i < P; ++i) {
        std::uint64_t p = w.primes[i];
        double logp = std::log(double(p));
        int kcap = std::max(1, int(logbound / logp) + 1);
        // cap powers by coefficient size at the leftmost abscissa
        basis[i].K = kcap;
        basis[i].c.assign(std::size_t(kcap) * J, cplx(0.0, 0.0));
        for (int k = 1; k <= kcap; ++k) {
            cplx b = L.b_coeff(p, unsigned(k));
            if (b == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < J; ++j) {
                cplx pks = std::exp(-pts[j] * (double(k) * logp));
                basis[i].c[std::size_t(k - 1) * J + j] =
                    b * pks / std::pow(double(k) * logp, m);
            }
        }
    }
    auto g_of = [&](std::size_t i, cplx z, std::vector<cplx>& out) {
        std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
        cplx zk{1.0, 0.0};
        for (int k = 1; k <= basis[i].K; ++k) {
            zk *= z;
            const cplx* row = &basis[i].c[std::size_t(k - 1) * J];
            for (std::size_t j = 0; j < J; ++j) out[j] += row[j] * zk;
        }
    };

    // current field F_j = sum_p g_p(s_j, omega_p), starting from omega == 1
    std::vector<cplx> F(J, cplx(0.0, 0.0));
    std::vector<cplx> g_now(J), g_new(J);
    for (std::size_t i = 0; i < P; ++i) {
        g_of(i, w.phases[i], g_now);
        for (std::size_t j = 0; j < J; ++j) F[j] += g_now[j];
    }
    auto sup_err = [&](const std::vector<cplx>& field) {
        double worst = 0.0;
        for (std::size_t j = 0; j < J; ++j)
            worst = std::max(worst, std::abs(field[j] - target_vals[j]));
        return worst;
    };

    // candidate circle (index 0 = angle 0 so z = 1 is always representable)
    std::vector<cplx> circle(circle_grid);
    for (int l = 0; l < circle_grid; ++l) {
        double ang = 2.0 * std::numbers::pi * l / circle_grid;
        circle[l] = {std::cos(ang), std::sin(ang)};
    }

    PhaseFitResult result;
    double current = sup_err(F);
    std::vector<cplx> trial(J);
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (std::size_t i = 0; i < P; ++i) {
            g_of(i, w.phases[i], g_now);
            double best = current;
            int best_l = -1;
            for (int l = 0; l < circle_grid; ++l) {
                g_of(i, circle[l], g_new);
                for (std::size_t j = 0; j < J; ++j)
                    trial[j] = F[j] - g_now[j] + g_new[j];
                double e = sup_err(trial);
                // strict improvement only: deterministic and non-increasing
                if (e < best) {
                    best = e;
                    best_l = l;
                }
            }
            if (best_l >= 0) {
                w.phases[i] = circle[best_l];
                g_of(i, circle[best_l], g_new);
                // same association as the trial expression, so `current`
                // remains the exact sup over the stored field
                for (std::size_t j = 0; j < J; ++j)
                    F[j] = F[j] - g_now[j] + g_new[j];
                current = best;
            }
        }
        result.error_per_sweep.push_back(current);
    }
    result.assignment = std::move(w);
    result.achieved_error = current;
    return result;
}

// ---- serialization -----------------------------------------------------------------

void save_phases(const PhaseAssignment& w, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open for writing: " + path);
    out << "# seed=" << w.seed << " prime_bound=" << w.prime_bound
        << " scheme=" << w.counter_scheme << "\n";
    char buf[80];
    for (std::size_t i = 0; i < w.primes.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%llu %.17g %.17g\n",
                      static_cast<unsigned long long>(w.primes[i]),
                      w.phases[i].real(), w.phases[i].imag());
        out << buf;
    }
}

PhaseAssignment load_phases(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open phase file: " + path);
    PhaseAssignment w;
    w.counter_scheme = "file";
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string tok;
            while (hs >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                if (key == "seed") w.seed = std::stoull(val);
                else if (key == "prime_bound") w.prime_bound = std::stoull(val);
                else if (key == "scheme") w.counter_scheme = val;
            }
            continue;
        }
        std::istringstream rs(line);
        std::uint64_t p;
        double re, im;
        if (!(rs >> p >> re >> im))
            throw parse_error(path + ":" + std::to_string(lineno) +
                              ": expected 'p re im'");
        if (!w.primes.empty() && p <= w.primes.back())
            throw parse_error(path + ":" + std::to_string(lineno) +
                              ": primes must be strictly ascending");
        w.primes.push_back(p);
        w.phases.emplace_back(re, im);
    }
    for (auto& z : w.phases)
        if (std::abs(std::abs(z) - 1.0) > 1e-9)
            throw validation_error(path + ": phases must have modulus 1");
    if (w.prime_bound == 0 && !w.primes.empty())
        w.prime_bound = w.primes.back();
    return w;
}

} // namespace itlog
