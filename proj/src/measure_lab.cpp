#include "itlog/measure_lab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <numeric>
#include <sstream>

#include "itlog/errors.hpp"
#include "itlog/random_model.hpp"

namespace itlog {

namespace {

constexpr double kQMargin = 0.05;

// counter-based deviate, same construction as the phase sampler
double uniform01(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = splitmix64(splitmix64(counter) ^ seed);
    return double(z >> 11) * 0x1.0p-53;
}

} // namespace

// ---- zero tables ---------------------------------------------------------------------

ZeroSet load_zeros(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open zero table: " + path);
    ZeroSet Z;
    Z.source = path;
    Z.rh_verified = true;
    std::string line;
    std::size_t lineno = 0;
    int ncols = 0; // columns of the first data line; 0 while undetermined
    while (std::getline(in, line)) {
        ++lineno;
        auto where = [&] { return path + ":" + std::to_string(lineno); };
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ss(line);
        std::vector<double> vals;
        double x;
        while (ss >> x) vals.push_back(x);
        if (!ss.eof()) {
            ss.clear();
            std::string junk;
            if (ss >> junk)
                throw parse_error(where() + ": unreadable token '" + junk +
                                  "'");
        }
        if (vals.empty()) continue;
        if (vals.size() > 2)
            throw parse_error(where() +
                              ": expected 'gamma' or 'beta gamma' per line");
        if (ncols == 0)
            ncols = int(vals.size());
        else if (int(vals.size()) != ncols)
            throw parse_error(where() +
                              ": column count differs from the first data "
                              "line (ordinate-only and beta-gamma layouts "
                              "cannot be mixed)");
        double beta = ncols == 1 ? 0.5 : vals[0];
        double gamma = ncols == 1 ? vals[0] : vals[1];
        if (!(beta > 0.0 && beta < 1.0))
            throw parse_error(where() + ": beta must lie in (0,1)");
        if (!Z.entries.empty() && !(gamma > Z.entries.back().gamma))
            throw parse_error(where() +
                              ": ordinates must be strictly ascending");
        if (beta != 0.5) Z.rh_verified = false;
        Z.entries.push_back({beta, gamma});
    }
    return Z;
}

std::size_t count_zeros_N(const ZeroSet& Z, double sigma, double T) {
    return std::size_t(std::count_if(
        Z.entries.begin(), Z.entries.end(), [&](const ZeroEntry& z) {
            return z.beta > sigma && std::abs(z.gamma) < T;
        }));
}

// ---- interval sets -------------------------------------------------------------------

IntervalSet IntervalSet::interval(double lo, double hi) {
    if (!(hi >= lo))
        throw validation_error("interval: upper end below lower end");
    IntervalSet s;
    if (hi > lo) s.iv_.push_back({lo, hi});
    return s;
}

void IntervalSet::subtract(double lo, double hi) {
    if (!(hi > lo)) return;
    std::vector<std::pair<double, double>> out;
    out.reserve(iv_.size() + 1);
    for (auto [a, b] : iv_) {
        if (b <= lo || a >= hi) {
            out.push_back({a, b});
            continue;
        }
        if (a < lo) out.push_back({a, lo});
        if (b > hi) out.push_back({hi, b});
    }
    iv_ = std::move(out);
}

bool IntervalSet::contains(double x) const {
    for (auto [a, b] : iv_) {
        if (x < a) return false;
        if (x <= b) return true;
    }
    return false;
}

double IntervalSet::total_measure() const {
    double m = 0.0;
    for (auto [a, b] : iv_) m += b - a;
    return m;
}

double IntervalSet::at_measure(double u) const {
    if (iv_.empty())
        throw validation_error("at_measure on an empty interval set");
    if (u < 0.0) u = 0.0;
    for (auto [a, b] : iv_) {
        double len = b - a;
        if (u <= len) return a + u;
        u -= len;
    }
    return iv_.back().second;
}

IntervalSet admissible_shifts(const ZeroSet& Z, const CompactSetContext& K,
                              double T, double delta, bool pole) {
    if (!(T > 0.0))
        throw validation_error("admissible_shifts: T must be positive");
    if (!(delta > 0.0))
        throw validation_error("admissible_shifts: delta must be positive");
    IntervalSet S = IntervalSet::interval(T, 2.0 * T);
    for (const ZeroEntry& z : Z.entries)
        if (z.beta > K.sigma0)
            S.subtract(z.gamma - K.tau0 - delta, z.gamma - K.tau0 + delta);
    if (pole) S.subtract(-K.tau0 - delta, -K.tau0 + delta);
    return S;
}

// ---- sampling ------------------------------------------------------------------------

SampleSet sample_QT(const LFunction& L, int m, const std::vector<cplx>& points,
                    const IntervalSet& shifts, std::size_t n,
                    SampleScheme scheme, std::uint64_t seed,
                    const EvalOptions& opts) {
    if (n < 1) throw validation_error("sample_QT: n must be >= 1");
    if (points.empty())
        throw validation_error("sample_QT: no evaluation points");
    for (cplx p : points)
        if (!(p.real() > L.sigma_L()))
            throw validation_error(
                "sample_QT: evaluation point Re = " + std::to_string(p.real()) +
                " is not right of the continuation abscissa " +
                std::to_string(L.sigma_L()));
    double M = shifts.total_measure();
    if (!(M > 0.0))
        throw validation_error("sample_QT: shift set has measure zero");

    SampleSet S;
    S.eval_points = points;
    S.provenance = "shift-QT";
    S.seed = scheme == SampleScheme::random ? seed : 0;
    S.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = scheme == SampleScheme::equispaced
                       ? (double(i) + 0.5) * M / double(n)
                       : uniform01(seed, i) * M;
        double tau = shifts.at_measure(u);
        std::vector<cplx> row(points.size());
        // continuation state is shared between points at equal heights
        std::vector<std::unique_ptr<LogTracker>> trackers;
        bool ok = true;
        try {
            for (std::size_t j = 0; j < points.size(); ++j) {
                cplx s = points[j] + cplx(0.0, tau);
                LogTracker* tr = nullptr;
                if (m == 0 || points[j].real() < opts.sigma_c) {
                    for (auto& cand : trackers)
                        if (cand->t() == s.imag()) {
                            tr = cand.get();
                            break;
                        }
                    if (!tr) {
                        trackers.push_back(std::make_unique<LogTracker>(
                            L, s.imag(), opts));
                        tr = trackers.back().get();
                    }
                }
                row[j] = eval_Hm(L, m, s, opts, tr).value;
            }
        } catch (const numeric_error&) {
            ok = false;
        }
        if (ok) {
            S.rows.push_back(std::move(row));
            S.shifts.push_back(tau);
        } else {
            ++S.dropped;
        }
    }
    if (S.rows.empty())
        throw numeric_error(
            "sample_QT: continuation failed on every sampled shift");
    return S;
}

SampleSet sample_Q(const LFunction& L, int m, const std::vector<cplx>& points,
                   std::size_t n, std::uint64_t seed,
                   std::uint64_t prime_bound) {
    if (n < 1) throw validation_error("sample_Q: n must be >= 1");
    if (points.empty())
        throw validation_error("sample_Q: no evaluation points");
    for (cplx p : points)
        if (!(p.real() > 0.5 + kQMargin))
            throw validation_error(
                "sample_Q: evaluation points need Re > " +
                std::to_string(0.5 + kQMargin) +
                " for a mean-square convergent model");
    SampleSet S;
    S.eval_points = points;
    S.provenance = "montecarlo-Q";
    S.seed = seed;
    S.prime_bound = prime_bound;
    S.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        PhaseAssignment w = sample_phases(seed + i, prime_bound);
        std::vector<cplx> row(points.size());
        for (std::size_t j = 0; j < points.size(); ++j)
            row[j] = eval_random_Hm(L, m, points[j], w).value;
        S.rows.push_back(std::move(row));
    }
    return S;
}

// ---- energy statistic ----------------------------------------------------------------

namespace {

using Rows = std::vector<const std::vector<cplx>*>;

double row_dist(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double dr = a[j].real() - b[j].real();
        double di = a[j].imag() - b[j].imag();
        s += dr * dr + di * di;
    }
    return std::sqrt(s);
}

double mean_cross(const Rows& A, const Rows& B) {
    double s = 0.0;
    for (const auto* a : A)
        for (const auto* b : B) s += row_dist(*a, *b);
    return s / (double(A.size()) * double(B.size()));
}

double energy_of(const Rows& A, const Rows& B) {
    return 2.0 * mean_cross(A, B) - mean_cross(A, A) - mean_cross(B, B);
}

Rows row_ptrs(const SampleSet& S) {
    Rows r;
    r.reserve(S.rows.size());
    for (const auto& row : S.rows) r.push_back(&row);
    return r;
}

} // namespace

double energy_distance(const SampleSet& A, const SampleSet& B) {
    if (A.eval_points != B.eval_points)
        throw validation_error(
            "energy_distance: samples use different evaluation points");
    if (A.rows.empty() || B.rows.empty())
        throw validation_error("energy_distance: empty sample");
    return energy_of(row_ptrs(A), row_ptrs(B));
}

double energy_permutation_pvalue(const SampleSet& A, const SampleSet& B,
                                 int permutations, std::uint64_t seed) {
    if (permutations < 1)
        throw validation_error("permutation count must be >= 1");
    Rows a = row_ptrs(A), b = row_ptrs(B);
    double observed = 2.0 * mean_cross(a, b) - mean_cross(a, a) -
                      mean_cross(b, b);
    if (A.eval_points != B.eval_points)
        throw validation_error(
            "energy_permutation_pvalue: samples use different points");

    Rows pool = a;
    pool.insert(pool.end(), b.begin(), b.end());
    const std::size_t N = pool.size(), nA = a.size();
    int exceed = 0;
    std::uint64_t ctr = 0;
    for (int k = 0; k < permutations; ++k) {
        // Fisher–Yates on indices with counter-based randomness, so the
        // p-value is reproducible across platforms
        std::vector<std::size_t> idx(N);
        std::iota(idx.begin(), idx.end(), std::size_t(0));
        for (std::size_t i = N - 1; i > 0; --i) {
            std::uint64_t r = splitmix64(splitmix64(ctr++) ^ seed);
            std::swap(idx[i], idx[r % (i + 1)]);
        }
        Rows pa(nA), pb(N - nA);
        for (std::size_t i = 0; i < nA; ++i) pa[i] = pool[idx[i]];
        for (std::size_t i = nA; i < N; ++i) pb[i - nA] = pool[idx[i]];
        if (energy_of(pa, pb) >= observed) ++exceed;
    }
    return double(1 + exceed) / double(permutations + 1);
}

double ball_frequency(const SampleSet& S, const Polynomial& P,
                      const CompactSetContext& K, double eps) {
    if (S.rows.empty()) throw validation_error("ball_frequency: empty sample");
    std::vector<std::size_t> inside;
    for (std::size_t j = 0; j < S.eval_points.size(); ++j)
        if (shape_contains(K.shape, S.eval_points[j])) inside.push_back(j);
    if (inside.empty())
        throw validation_error(
            "ball_frequency: no evaluation points inside the target set");
    std::size_t hits = 0;
    for (const auto& row : S.rows) {
        double worst = 0.0;
        for (std::size_t j : inside)
            worst = std::max(worst,
                             std::abs(row[j] - P.eval(S.eval_points[j])));
        if (worst < eps) ++hits;
    }
    return double(hits) / double(S.rows.size());
}

// ---- witness scan ----------------------------------------------------------------------

namespace {

// Truncated coefficient polynomial D(s_j + i tau) = sum_n c_{j,n} u_n with
// u_n = n^{-i tau}: the tau-dependence is a unit rotation per term, so a
// lattice scan advances with one complex multiply per term per step.
struct PolyBank {
    std::size_t count = 0;
    std::vector<double> logn;
    std::vector<cplx> c;        // grid-point major: c[j * count + idx]
    std::vector<cplx> step_mul; // exp(-i step log n)
    std::vector<cplx> u;        // exp(-i tau log n)

    void build(const LFunction& L, int m, const std::vector<cplx>& pts,
               double y, double step) {
        auto pp = shared_prime_powers(std::uint64_t(y));
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < pp->size(); ++i) {
            const PrimePower& q = (*pp)[i];
            if (double(q.n) > y) break;
            if (L.b_coeff(q.p, q.k) != cplx(0.0, 0.0)) keep.push_back(i);
        }
        count = keep.size();
        logn.resize(count);
        step_mul.resize(count);
        u.assign(count, cplx(1.0, 0.0));
        c.resize(pts.size() * count);
        for (std::size_t idx = 0; idx < count; ++idx) {
            const PrimePower& q = (*pp)[keep[idx]];
            logn[idx] = q.log_n;
            step_mul[idx] = std::polar(1.0, -step * q.log_n);
            cplx bw = L.b_coeff(q.p, q.k) / std::pow(q.log_n, double(m));
            for (std::size_t j = 0; j < pts.size(); ++j)
                c[j * count + idx] = bw * std::exp(-pts[j] * q.log_n);
        }
    }

    void anchor(double tau) {
        for (std::size_t idx = 0; idx < count; ++idx)
            u[idx] = std::polar(1.0, -tau * logn[idx]);
    }

    void advance() {
        for (std::size_t idx = 0; idx < count; ++idx) u[idx] *= step_mul[idx];
    }

    cplx eval_point(std::size_t j) const {
        cplx acc{0.0, 0.0};
        const cplx* row = &c[j * count];
        for (std::size_t idx = 0; idx < count; ++idx) acc += row[idx] * u[idx];
        return acc;
    }
};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Shared-pass confirmation for the main-branch log of the built-in zeta at
// m = 0: one n^{-i tau} table per candidate serves every grid point, the
// sigma/height offsets live in per-point tables W, and the branch is the one
// nearest the stage-two polynomial (re-derived by continuation when the two
// disagree by more than branch_guard).
struct ZetaConfirm {
    const std::vector<cplx>& pts;
    const std::vector<cplx>& targets;
    double guard;
    EvalOptions eval;
    int Nmax;
    std::vector<double> logn; // index i <-> n = i + 1
    std::vector<std::vector<cplx>> W;
    std::vector<cplx> u;
    std::uint64_t fallbacks = 0;

    ZetaConfirm(const std::vector<cplx>& pts_, const std::vector<cplx>& tg,
                double max_height, double guard_, const EvalOptions& ev)
        : pts(pts_), targets(tg), guard(guard_), eval(ev),
          Nmax(em_N_for_t(max_height)) {
        logn.resize(std::size_t(Nmax) - 1);
        for (int n = 1; n < Nmax; ++n) logn[n - 1] = std::log(double(n));
        W.resize(pts.size());
        for (std::size_t j = 0; j < pts.size(); ++j) {
            W[j].resize(std::size_t(Nmax) - 1);
            for (int n = 1; n < Nmax; ++n)
                W[j][n - 1] = std::exp(-pts[j] * logn[n - 1]);
        }
        u.resize(std::size_t(Nmax) - 1);
    }

    // confirmed sup over the grid, or a value >= eps as soon as one point
    // fails; d2 supplies the branch hints
    double sup_error(const LFunction& L, double tau,
                     const std::vector<cplx>& d2, double eps) {
        int Nneed = 0;
        for (std::size_t j = 0; j < pts.size(); ++j)
            Nneed = std::max(Nneed, em_N_for_t(pts[j].imag() + tau));
        Nneed = std::min(Nneed, Nmax);
        for (int n = 1; n < Nneed; ++n)
            u[n - 1] = std::polar(1.0, -tau * logn[n - 1]);
        double sup = 0.0;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            cplx s = pts[j] + cplx(0.0, tau);
            int N = std::min(em_N_for_t(s.imag()), Nneed);
            cplx acc{0.0, 0.0};
            const cplx* row = W[j].data();
            for (int n = 1; n < N; ++n) acc += row[n - 1] * u[n - 1];
            acc += em_completion(s, double(N)).first;
            cplx lg = std::log(acc);
            double k = std::round((d2[j].imag() - lg.imag()) / kTwoPi);
            cplx chosen = lg + cplx(0.0, kTwoPi * k);
            if (std::abs(chosen - d2[j]) > guard) {
                ++fallbacks;
                LogTracker walk(L, s.imag(), eval);
                chosen = walk.log_at(s.real()).value;
            }
            double diff = std::abs(chosen - targets[j]);
            sup = std::max(sup, diff);
            if (diff >= eps) return sup; // candidate already rejected
        }
        return sup;
    }
};

// Full-evaluator confirmation: exact for every backend and every m, at the
// price of a continuation walk per distinct height per candidate.
double generic_sup_error(const LFunction& L, int m,
                         const std::vector<cplx>& pts,
                         const std::vector<cplx>& targets, double tau,
                         double eps, const EvalOptions& eval) {
    std::vector<std::unique_ptr<LogTracker>> trackers;
    double sup = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        cplx s = pts[j] + cplx(0.0, tau);
        LogTracker* tr = nullptr;
        if (m == 0 || pts[j].real() < eval.sigma_c) {
            for (auto& cand : trackers)
                if (cand->t() == s.imag()) {
                    tr = cand.get();
                    break;
                }
            if (!tr) {
                trackers.push_back(
                    std::make_unique<LogTracker>(L, s.imag(), eval));
                tr = trackers.back().get();
            }
        }
        double diff = std::abs(eval_Hm(L, m, s, eval, tr).value - targets[j]);
        sup = std::max(sup, diff);
        if (diff >= eps) return sup;
    }
    return sup;
}

} // namespace

WitnessReport witness_search(const LFunction& L, int m,
                             const Polynomial& target,
                             const CompactSetContext& K,
                             const IntervalSet& shifts, double step,
                             double eps, const WitnessOptions& opts) {
    if (m < 0) throw validation_error("witness_search: m must be >= 0");
    if (!(step > 0.0))
        throw validation_error("witness_search: step must be positive");
    if (!(opts.y1 >= 2.0 && opts.y2 >= opts.y1))
        throw validation_error(
            "witness_search: need 2 <= y1 <= y2 for the pre-filter cascade");

    WitnessReport rep;
    rep.target = target;
    rep.K = K;
    rep.epsilon = eps;
    if (shifts.empty()) return rep;

    const std::vector<cplx> pts = K.grid(opts.rect_grid, opts.disk_boundary);
    const std::size_t J = pts.size();
    std::vector<cplx> targets(J);
    for (std::size_t j = 0; j < J; ++j) targets[j] = target.eval(pts[j]);

    PolyBank bank1, bank2;
    bank1.build(L, m, pts, opts.y1, step);
    bank2.build(L, m, pts, opts.y2, step);
    const double thr1 = eps + opts.slack1;
    const double thr2 = eps + opts.slack2;

    double max_height = 0.0;
    for (auto [a, b] : shifts.intervals())
        max_height = std::max({max_height, std::abs(a), std::abs(b)});
    double max_im = 0.0;
    for (cplx p : pts) max_im = std::max(max_im, std::abs(p.imag()));
    max_height += max_im;

    const bool fast_zeta =
        L.kind() == LFunction::Kind::zeta && m == 0 &&
        double(em_N_for_t(max_height)) * double(J) <= 3.0e7;
    std::unique_ptr<ZetaConfirm> fast;
    if (fast_zeta)
        fast = std::make_unique<ZetaConfirm>(pts, targets, max_height,
                                             opts.branch_guard, opts.eval);

    std::vector<cplx> d2(J);
    for (auto [a, b] : shifts.intervals()) {
        auto n_steps = std::uint64_t(std::floor((b - a) / step + 1e-9));
        if (n_steps == 0) continue;
        rep.scanned_measure += double(n_steps) * step;
        for (std::uint64_t k = 0; k < n_steps; ++k) {
            double tau = a + (double(k) + 0.5) * step;
            if (k % opts.refresh_every == 0)
                bank1.anchor(tau);
            else
                bank1.advance();
            ++rep.scanned_steps;

            bool pass1 = true;
            for (std::size_t j = 0; j < J; ++j)
                if (std::abs(bank1.eval_point(j) - targets[j]) >= thr1) {
                    pass1 = false;
                    break;
                }
            if (!pass1) continue;
            ++rep.stage1_passes;

            bank2.anchor(tau);
            bool pass2 = true;
            for (std::size_t j = 0; j < J; ++j) {
                d2[j] = bank2.eval_point(j);
                if (std::abs(d2[j] - targets[j]) >= thr2) {
                    pass2 = false;
                    break;
                }
            }
            if (!pass2) continue;

            ++rep.confirm_evals;
            double sup;
            try {
                sup = fast ? fast->sup_error(L, tau, d2, eps)
                           : generic_sup_error(L, m, pts, targets, tau, eps,
                                               opts.eval);
            } catch (const numeric_error&) {
                continue; // continuation failed: not confirmable, not a hit
            }
            if (sup < eps) rep.hits.push_back({tau, sup});
        }
    }
    if (fast) rep.branch_fallbacks = fast->fallbacks;
    // hit boxes live on the scan lattice, so they touch but never overlap
    rep.density_estimate =
        rep.scanned_measure > 0.0
            ? std::min(1.0, double(rep.hits.size()) * step /
                                rep.scanned_measure)
            : 0.0;
    return rep;
}

} // namespace itlog
