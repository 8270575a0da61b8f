#ifndef ITLOG_CHARACTERS_HPP
#define ITLOG_CHARACTERS_HPP

#include <complex>
#include <cstdint>
#include <vector>

namespace itlog {

// Kronecker symbol (D/n), the fully extended quadratic residue symbol.
int kronecker_symbol(std::int64_t D, std::int64_t n);

// A Dirichlet character mod q, stored as an exact value table over residues.
//
// Enumeration convention (stable across runs, documented in the README):
// write q = 2^{a} * p1^{a1} * ... * pr^{ar} with p1 < p2 < ... odd.  The unit
// group splits into cyclic components with fixed generators:
//   - 2^a, a = 2:        <-1>                       (order 2)
//   - 2^a, a >= 3:       <-1> then <5>              (orders 2, 2^{a-2})
//   - p^a, p odd:        <g>, g the smallest primitive root mod p^a
// Components are ordered: the 2-part first, then odd primes ascending.  An
// index j in [0, phi(q)) is expanded least-significant-digit-first in the
// mixed radix of component orders (d_1, d_2, ...); digit j_i sets the value
// on the i-th generator to exp(2*pi*i * j_i / d_i).  Index 0 is principal.
class DirichletCharacter {
public:
    static DirichletCharacter by_index(std::uint64_t q, std::uint64_t index);
    // Real character n -> (D/n) of modulus |D|; D must be congruent to 0 or
    // 1 mod 4 and |D| >= 3 (so the symbol is periodic with period |D|).
    static DirichletCharacter kronecker(std::int64_t D);

    std::uint64_t modulus() const { return q_; }
    std::uint64_t index() const { return index_; }
    std::complex<double> operator()(std::uint64_t n) const {
        return table_[n % q_];
    }
    const std::vector<std::complex<double>>& table() const { return table_; }

    bool is_principal() const { return principal_; }
    // True when the character is induced by no character of smaller modulus.
    bool is_primitive() const { return primitive_; }
    bool is_real() const;

private:
    DirichletCharacter() = default;
    void classify();

    std::uint64_t q_ = 1;
    std::uint64_t index_ = 0;
    std::vector<std::complex<double>> table_;
    bool principal_ = false;
    bool primitive_ = false;
};

// Euler totient by trial-division factorization (q fits comfortably in 64 bits
// here; moduli are capped at 10^4 upstream).
std::uint64_t euler_phi(std::uint64_t q);

} // namespace itlog

#endif
