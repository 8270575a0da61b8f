#ifndef ITLOG_RANDOM_MODEL_HPP
#define ITLOG_RANDOM_MODEL_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "itlog/lfunction.hpp"
#include "itlog/region.hpp"

namespace itlog {

// Independent uniform unit-modulus phases, one per prime, produced by a
// counter-based generator: the phase at p is a pure function of (seed, p),
// so parallel evaluation order cannot change anything.
struct PhaseAssignment {
    std::uint64_t prime_bound = 0;
    std::uint64_t seed = 0;
    std::string counter_scheme = "splitmix64-v1";
    std::vector<std::uint64_t> primes;        // ascending, <= prime_bound
    std::vector<std::complex<double>> phases; // aligned with primes

    std::complex<double> phase_of(std::uint64_t p) const; // throws if absent
    bool has_prime(std::uint64_t p) const;
};

// splitmix64 finalizer; exposed for tests of the counter scheme.
std::uint64_t splitmix64(std::uint64_t x);

PhaseAssignment sample_phases(std::uint64_t seed, std::uint64_t prime_bound);
// all-ones assignment (the deterministic collapse omega == 1)
PhaseAssignment unit_phases(std::uint64_t prime_bound);

// Completely multiplicative extension omega(n) = prod omega(p)^{nu_p(n)}.
std::complex<double> omega_at(const PhaseAssignment& w, std::uint64_t n);

// Local factor g_p(s,z) = sum_{k>=1} b(p^k) z^k / ((k log p)^m p^{ks});
// requires |z| = 1 and Re s > theta; truncated once the geometric tail
// drops below 1e-14.
std::complex<double> local_factor_g(const LFunction& L, int m,
                                    std::complex<double> s,
                                    std::complex<double> z, std::uint64_t p);

// sum_{p <= prime_bound} g_p(s, omega(p)) with per-prime truncation Kmax and
// a heuristic tail size (root of the omitted primes' second moment) in
// err_bound.
ApproxValue eval_random_Hm(const LFunction& L, int m, std::complex<double> s,
                           const PhaseAssignment& w, int Kmax = 64);

// Orthogonality second moment sum_{n>=2} |Lambda(n)|^2/((log n)^{2m+2} n^{2s});
// equals E|H_m(s, omega)|^2 for the full random series.
double analytic_second_moment(const LFunction& L, int m, double sigma);
// Same sum restricted to prime powers with p <= prime_bound: the exact second
// moment of the truncated model that eval_random_Hm simulates.
double analytic_second_moment_truncated(const LFunction& L, int m,
                                        double sigma,
                                        std::uint64_t prime_bound);
// sqrt(full - truncated second moment): RMS size of the omitted tail of the
// random series.  Memoized on (L, m, sigma, prime_bound).
double random_tail_rms(const LFunction& L, int m, double sigma,
                       std::uint64_t prime_bound);

// Coordinate-descent phase fit: cycle over primes in increasing order; for
// each, try a fixed circular grid of candidate phases and keep the one that
// minimizes the sup over the evaluation grid of |sum_p g_p - target|.
struct PhaseFitResult {
    PhaseAssignment assignment;
    double achieved_error = 0.0;
    std::vector<double> error_per_sweep;
};
PhaseFitResult phase_fit(const LFunction& L, int m, const Polynomial& target,
                         const CompactSetContext& K, std::uint64_t prime_bound,
                         int sweeps, int circle_grid = 64, int rect_grid = 7,
                         int disk_boundary = 16);

// Text serialization: '# seed=... prime_bound=... scheme=...' header followed
// by 'p re im' lines.  Round-trips exactly (decimal shortest-round-trip).
void save_phases(const PhaseAssignment& w, const std::string& path);
PhaseAssignment load_phases(const std::string& path);

} // namespace itlog

#endif
