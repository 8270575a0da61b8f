#include "doctest.h"

#include <cmath>
#include <complex>
#include <filesystem>

#include "itlog/errors.hpp"
#include "itlog/evaluator.hpp"
#include "itlog/lfunction.hpp"
#include "itlog/random_model.hpp"
#include "oracles.hpp"

using namespace itlog;
using cplx = std::complex<double>;

TEST_CASE("phase sampling is deterministic and lies on the unit circle") {
    auto w1 = sample_phases(42, 10000);
    auto w2 = sample_phases(42, 10000);
    REQUIRE(w1.primes.size() == w2.primes.size());
    for (std::size_t i = 0; i < w1.primes.size(); ++i) {
        CHECK(w1.primes[i] == w2.primes[i]);
        CHECK(w1.phases[i] == w2.phases[i]); // bit-identical
        CHECK(std::abs(std::abs(w1.phases[i]) - 1.0) < 1e-12);
    }
    auto w3 = sample_phases(43, 10000);
    std::size_t differing = 0;
    for (std::size_t i = 0; i < w1.phases.size(); ++i)
        if (w1.phases[i] != w3.phases[i]) ++differing;
    CHECK(differing > w1.phases.size() / 2);
    // the empirical mean of many independent circle points is near zero
    cplx mean = 0.0;
    for (auto z : w1.phases) mean += z;
    mean /= double(w1.phases.size());
    CHECK(std::abs(mean) < 0.1);
    CHECK_THROWS_AS(sample_phases(1, 1), validation_error);
}

TEST_CASE("phases extend multiplicatively to prime powers and composites") {
    auto w = sample_phases(7, 1000);
    auto z2 = w.phase_of(2), z3 = w.phase_of(3);
    CHECK(std::abs(omega_at(w, 8) - z2 * z2 * z2) < 1e-12);
    CHECK(std::abs(omega_at(w, 12) - z2 * z2 * z3) < 1e-12);
    CHECK(std::abs(omega_at(w, 1) - cplx(1.0, 0.0)) < 1e-15);
    CHECK_THROWS_AS(omega_at(w, 0), validation_error);
    CHECK_THROWS_AS(w.phase_of(4), validation_error);
    CHECK(w.has_prime(997));
    CHECK_FALSE(w.has_prime(1001));
}

TEST_CASE("unit phases turn the model into the plain prime-power series") {
    auto L = LFunction::zeta();
    auto w = unit_phases(10000);
    double sigma = 1.5;
    for (int m : {0, 1}) {
        // independent brute force over the same prime set, all powers
        auto primes = itlog_test::oracle_primes(10000);
        double logbound = std::log(10000.0);
        cplx ref = 0.0;
        for (std::uint64_t p : primes) {
            double logp = std::log(double(p));
            int kcap = std::max(1, std::min(64, int(logbound / logp) + 2));
            for (int k = 1; k <= kcap; ++k) {
                double logn = k * logp;
                ref += L.b_coeff(p, unsigned(k)) *
                       std::exp(-sigma * logn) / std::pow(logn, m);
            }
        }
        auto got = eval_random_Hm(L, m, cplx(sigma, 0.0), w);
        CHECK(std::abs(got.value - ref) < 1e-12);
    }
}

TEST_CASE("second moment: analytic, truncated, and tail forms are consistent") {
    auto L = LFunction::zeta();
    for (double sigma : {0.75, 0.9, 1.2}) {
        double full = analytic_second_moment(L, 0, sigma);
        double trunc = analytic_second_moment_truncated(L, 0, sigma, 10000);
        double rms = random_tail_rms(L, 0, sigma, 10000);
        CHECK(full >= trunc);
        CHECK(rms * rms == doctest::Approx(full - trunc).epsilon(1e-9));
        // memoized path returns the identical value
        CHECK(random_tail_rms(L, 0, sigma, 10000) == rms);
        // truncation converges upward toward the full moment
        double trunc2 = analytic_second_moment_truncated(L, 0, sigma, 100000);
        CHECK(trunc2 >= trunc - 1e-15);
        CHECK(full - trunc2 < full - trunc + 1e-15);
    }
    CHECK_THROWS_AS(analytic_second_moment(L, 0, 0.5), numeric_error);
}

TEST_CASE("monte-carlo second moment matches the analytic value") {
    auto L = LFunction::zeta();
    const double sigma = 0.8;
    const int n = 2000;
    const std::uint64_t bound = 10000;
    double acc = 0.0;
    cplx mean = 0.0;
    for (int i = 0; i < n; ++i) {
        auto w = sample_phases(1000 + std::uint64_t(i), bound);
        cplx v = eval_random_Hm(L, 0, cplx(sigma, 0.0), w).value;
        acc += std::norm(v);
        mean += v;
    }
    acc /= n;
    mean /= double(n);
    double expect = analytic_second_moment_truncated(L, 0, sigma, bound);
    CHECK(std::abs(acc - expect) < 0.10 * expect);
    CHECK(std::abs(mean) < 3.0 * std::sqrt(expect / n) + 0.02);
}

TEST_CASE("random evaluation respects the convergence threshold") {
    auto L = LFunction::zeta();
    auto w = sample_phases(5, 1000);
    CHECK_THROWS_AS(eval_random_Hm(L, 0, cplx(0.5, 0.0), w),
                    unsupported_region_error);
    CHECK_THROWS_AS(eval_random_Hm(L, -1, cplx(0.8, 0.0), w),
                    validation_error);
    // err_bound reports the tail RMS of the omitted primes
    auto v = eval_random_Hm(L, 0, cplx(0.8, 0.0), w);
    CHECK(v.err_bound == doctest::Approx(random_tail_rms(L, 0, 0.8, 1000)));
}

TEST_CASE("local euler factors stay on the unit circle constraint") {
    auto L = LFunction::zeta();
    CHECK_THROWS_AS(local_factor_g(L, 0, cplx(0.8, 0.0), cplx(2.0, 0.0), 2),
                    validation_error);
    // with z = 1 the local factor matches the k-sum of the series
    cplx z = local_factor_g(L, 0, cplx(1.5, 0.0), cplx(1.0, 0.0), 2);
    cplx ref = 0.0;
    for (int k = 1; k <= 64; ++k)
        ref += (1.0 / k) * std::pow(2.0, -1.5 * k);
    CHECK(std::abs(z - ref) < 1e-12);
}

TEST_CASE("phase save/load round trip") {
    auto w = sample_phases(99, 5000);
    auto path = (std::filesystem::temp_directory_path() /
                 "itlog_test_phases.json")
                    .string();
    save_phases(w, path);
    auto r = load_phases(path);
    CHECK(r.seed == w.seed);
    CHECK(r.prime_bound == w.prime_bound);
    CHECK(r.counter_scheme == w.counter_scheme);
    REQUIRE(r.primes.size() == w.primes.size());
    for (std::size_t i = 0; i < w.primes.size(); ++i) {
        CHECK(r.primes[i] == w.primes[i]);
        CHECK(r.phases[i] == w.phases[i]); // exact round trip
    }
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_phases("/nonexistent/phases.json"),
                    validation_error);
}

TEST_CASE("phase fitting reduces the sup error sweep over sweep") {
    auto L = LFunction::zeta();
    auto K = CompactSetContext::make(Disk{cplx(0.8, 0.0), 0.02}, 0.5);
    auto target = Polynomial::constant(cplx(0.1, 0.05));
    auto fit = phase_fit(L, 0, target, K, 200, 3, 16);
    REQUIRE(fit.error_per_sweep.size() == 3);
    CHECK(fit.error_per_sweep[1] <= fit.error_per_sweep[0] + 1e-12);
    CHECK(fit.error_per_sweep[2] <= fit.error_per_sweep[1] + 1e-12);
    CHECK(fit.achieved_error ==
          doctest::Approx(fit.error_per_sweep.back()));
    for (auto z : fit.assignment.phases)
        CHECK(std::abs(std::abs(z) - 1.0) < 1e-9);
    // deterministic
    auto fit2 = phase_fit(L, 0, target, K, 200, 3, 16);
    CHECK(fit2.achieved_error == fit.achieved_error);
}
