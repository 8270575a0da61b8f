#ifndef ITLOG_PRIMES_HPP
#define ITLOG_PRIMES_HPP

#include <cstdint>
#include <vector>

namespace itlog {

// Primes up to an inclusive bound, plus O(1) primality lookup below it.
class PrimeTable {
public:
    explicit PrimeTable(std::uint64_t bound);

    std::uint64_t bound() const { return bound_; }
    const std::vector<std::uint64_t>& primes() const { return primes_; }
    std::size_t count() const { return primes_.size(); }
    bool is_prime(std::uint64_t n) const;

private:
    std::uint64_t bound_;
    std::vector<std::uint64_t> primes_;
    std::vector<bool> composite_; // indexed by n, n <= bound
};

// One prime power n = p^k with its logarithm cached; the tables below are
// sorted by n.  log n = k log p is the natural weight in every series here.
struct PrimePower {
    std::uint64_t n;
    std::uint64_t p;
    unsigned k;
    double log_n;
};

// All prime powers p^k <= bound, ascending in n.
std::vector<PrimePower> prime_powers_up_to(std::uint64_t bound,
                                           const PrimeTable& table);
std::vector<PrimePower> prime_powers_up_to(std::uint64_t bound);

// Writes (p, k) if n is a prime power, using trial division by table primes.
// Returns false for n < 2 and for n with two distinct prime factors.
bool as_prime_power(std::uint64_t n, const PrimeTable& table,
                    std::uint64_t& p, unsigned& k);

} // namespace itlog

#endif
