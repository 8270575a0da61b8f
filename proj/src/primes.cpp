#include "itlog/primes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace itlog {

PrimeTable::PrimeTable(std::uint64_t bound) : bound_(bound) {
    composite_.assign(static_cast<std::size_t>(bound_) + 1, false);
    composite_[0] = true;
    if (composite_.size() > 1) composite_[1] = true;
    for (std::uint64_t i = 2; i * i <= bound_; ++i) {
        if (composite_[static_cast<std::size_t>(i)]) continue;
        for (std::uint64_t j = i * i; j <= bound_; j += i)
            composite_[static_cast<std::size_t>(j)] = true;
    }
    for (std::uint64_t n = 2; n <= bound_; ++n)
        if (!composite_[static_cast<std::size_t>(n)]) primes_.push_back(n);
}

bool PrimeTable::is_prime(std::uint64_t n) const {
    if (n > bound_)
        throw std::out_of_range("PrimeTable::is_prime: n exceeds table bound");
    if (n < 2) return false;
    return !composite_[static_cast<std::size_t>(n)];
}

std::vector<PrimePower> prime_powers_up_to(std::uint64_t bound,
                                           const PrimeTable& table) {
    std::vector<PrimePower> out;
    if (bound < 2) return out;
    for (std::uint64_t p : table.primes()) {
        if (p > bound) break;
        double logp = std::log(static_cast<double>(p));
        std::uint64_t n = p;
        unsigned k = 1;
        for (;;) {
            out.push_back({n, p, k, k * logp});
            if (n > bound / p) break;
            n *= p;
            ++k;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const PrimePower& a, const PrimePower& b) { return a.n < b.n; });
    return out;
}

std::vector<PrimePower> prime_powers_up_to(std::uint64_t bound) {
    PrimeTable table(bound);
    return prime_powers_up_to(bound, table);
}

bool as_prime_power(std::uint64_t n, const PrimeTable& table,
                    std::uint64_t& p, unsigned& k) {
    if (n < 2) return false;
    for (std::uint64_t q : table.primes()) {
        if (q * q > n) break;
        if (n % q == 0) {
            unsigned e = 0;
            while (n % q == 0) { n /= q; ++e; }
            if (n != 1) return false;
            p = q;
            k = e;
            return true;
        }
    }
    // No divisor up to sqrt(n): n itself is prime (requires table bound^2 >= n).
    p = n;
    k = 1;
    return true;
}

} // namespace itlog
