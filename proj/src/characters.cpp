#include "itlog/characters.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "itlog/errors.hpp"

namespace itlog {

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

std::uint64_t pow_mod(std::uint64_t g, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    g %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, g, m);
        g = mul_mod(g, g, m);
        e >>= 1;
    }
    return r;
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, unsigned>> f;
    for (std::uint64_t d = 2; d * d <= n; d += (d == 2) ? 1 : 2) {
        if (n % d) continue;
        unsigned e = 0;
        while (n % d == 0) { n /= d; ++e; }
        f.emplace_back(d, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

// Smallest primitive root mod p^a for odd prime p.  Standard search: find a
// generator mod p by checking g^{(p-1)/r} != 1 for every prime r | p-1, then
// lift to p^a (g works mod p^a unless g^{p-1} = 1 mod p^2, in which case g+p
// does).
std::uint64_t primitive_root(std::uint64_t p, unsigned a) {
    auto fac = factorize(p - 1);
    std::uint64_t g = 2;
    for (;; ++g) {
        bool ok = true;
        for (auto& [r, e] : fac) {
            (void)e;
            if (pow_mod(g, (p - 1) / r, p) == 1) { ok = false; break; }
        }
        if (ok) break;
    }
    if (a == 1) return g;
    std::uint64_t p2 = p * p;
    if (pow_mod(g, p - 1, p2) == 1) g += p;
    return g;
}

// x = 1 mod (q/m), x = g mod m; the lifted generator acting on the m-component
// of (Z/q)^* while fixing the rest.
std::uint64_t crt_lift(std::uint64_t g, std::uint64_t m, std::uint64_t q) {
    std::uint64_t m2 = q / m;
    if (m2 == 1) return g % q;
    // solve 1 + m2*t = g (mod m)
    std::uint64_t inv = pow_mod(m2 % m, euler_phi(m) - 1, m); // m2 coprime to m
    std::uint64_t diff = ((g % m) + m - 1 % m) % m;
    std::uint64_t t = mul_mod(diff, inv, m);
    return (1 + m2 * t) % q;
}

struct Component {
    std::uint64_t gen;   // generator lifted mod q
    std::uint64_t order; // component order
};

std::vector<Component> unit_group_components(std::uint64_t q) {
    std::vector<Component> comps;
    auto fac = factorize(q);
    // 2-part first
    for (auto& [p, a] : fac) {
        if (p != 2) continue;
        std::uint64_t m = 1;
        for (unsigned i = 0; i < a; ++i) m *= 2;
        if (a == 2) {
            comps.push_back({crt_lift(3, m, q), 2});
        } else if (a >= 3) {
            comps.push_back({crt_lift(m - 1, m, q), 2});
            comps.push_back({crt_lift(5, m, q), m / 4});
        }
        // a == 1: trivial component, nothing to do
    }
    for (auto& [p, a] : fac) {
        if (p == 2) continue;
        std::uint64_t m = 1;
        for (unsigned i = 0; i < a; ++i) m *= p;
        std::uint64_t g = primitive_root(p, a);
        comps.push_back({crt_lift(g % m, m, q), euler_phi(m)});
    }
    return comps;
}

std::complex<double> root_of_unity(std::uint64_t num, std::uint64_t den) {
    num %= den;
    // exact values at the four cardinal points keep real characters exact
    if (num == 0) return {1.0, 0.0};
    if (2 * num == den) return {-1.0, 0.0};
    if (4 * num == den) return {0.0, 1.0};
    if (4 * num == 3 * den) return {0.0, -1.0};
    double ang = 2.0 * std::numbers::pi * static_cast<double>(num) /
                 static_cast<double>(den);
    return {std::cos(ang), std::sin(ang)};
}

} // namespace

std::uint64_t euler_phi(std::uint64_t q) {
    std::uint64_t r = q;
    for (auto& [p, e] : factorize(q)) {
        (void)e;
        r -= r / p;
    }
    return r;
}

int kronecker_symbol(std::int64_t D, std::int64_t n) {
    // Standard extension of the Jacobi symbol; see any algorithmic number
    // theory text.  Handles n <= 0 and even n.
    std::int64_t a = D;
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -sign;
    }
    // strip factors of 2 from n; (a/2) = 0 if a even, else (2/a) by a mod 8
    int v = 0;
    while (n % 2 == 0) { n /= 2; ++v; }
    if (v > 0 && a % 2 == 0) return 0;
    if (v & 1) {
        std::int64_t am = ((a % 8) + 8) % 8;
        if (am == 3 || am == 5) sign = -sign;
    }
    a %= n;
    if (a < 0) a += n;
    // now Jacobi symbol (a/n), n odd positive
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            std::int64_t nm = n % 8;
            if (nm == 3 || nm == 5) sign = -sign;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) sign = -sign;
        a %= n;
    }
    return n == 1 ? sign : 0;
}

DirichletCharacter DirichletCharacter::by_index(std::uint64_t q,
                                                std::uint64_t index) {
    if (q < 1) throw validation_error("character modulus must be >= 1");
    if (q > 10000)
        throw validation_error("character modulus capped at 10^4");
    std::uint64_t phi = euler_phi(q);
    if (index >= phi)
        throw validation_error("character index out of range [0, phi(q))");

    DirichletCharacter chi;
    chi.q_ = q;
    chi.index_ = index;
    chi.table_.assign(q, std::complex<double>(0.0, 0.0));

    auto comps = unit_group_components(q);
    // digits of index, least significant first
    std::vector<std::uint64_t> digit(comps.size(), 0);
    std::uint64_t rest = index;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        digit[i] = rest % comps[i].order;
        rest /= comps[i].order;
    }
    // walk the whole group once with an odometer over exponent tuples
    std::vector<std::uint64_t> e(comps.size(), 0);
    std::uint64_t residue = 1 % q;
    // chi on the current residue: sum over components of e_i * digit_i / d_i
    for (;;) {
        // value = exp(2*pi*i * sum e_i*digit_i/d_i); build with a common
        // denominator lcm to stay exact at the cardinal angles
        std::uint64_t den = 1;
        for (auto& c : comps) den = std::lcm(den, c.order);
        std::uint64_t num = 0;
        for (std::size_t i = 0; i < comps.size(); ++i)
            num = (num + e[i] * digit[i] % den * (den / comps[i].order)) % den;
        chi.table_[residue] = root_of_unity(num, den);

        // odometer increment; multiply the running residue as we go
        std::size_t i = 0;
        for (; i < comps.size(); ++i) {
            residue = mul_mod(residue, comps[i].gen, q);
            if (++e[i] < comps[i].order) break;
            // e[i] wrapped to 0: residue returned to gen^0 on this axis
            e[i] = 0;
        }
        if (i == comps.size()) break;
    }
    if (q == 1) chi.table_[0] = 1.0; // the (trivial) character mod 1
    chi.classify();
    return chi;
}

DirichletCharacter DirichletCharacter::kronecker(std::int64_t D) {
    std::int64_t r = ((D % 4) + 4) % 4;
    if (r != 0 && r != 1)
        throw validation_error("kronecker character: D must be 0 or 1 mod 4");
    std::uint64_t q = static_cast<std::uint64_t>(D < 0 ? -D : D);
    if (q < 3) throw validation_error("kronecker character: |D| must be >= 3");
    if (q > 10000)
        throw validation_error("character modulus capped at 10^4");
    DirichletCharacter chi;
    chi.q_ = q;
    chi.index_ = 0; // not in the by_index enumeration; identified by name
    chi.table_.assign(q, std::complex<double>(0.0, 0.0));
    for (std::uint64_t n = 0; n < q; ++n)
        chi.table_[n] = static_cast<double>(
            kronecker_symbol(D, static_cast<std::int64_t>(n)));
    chi.classify();
    return chi;
}

void DirichletCharacter::classify() {
    const std::complex<double> one(1.0, 0.0);
    principal_ = true;
    for (std::uint64_t n = 0; n < q_; ++n) {
        if (std::gcd(n, q_) != 1) continue;
        if (std::abs(table_[n] - one) > 1e-12) { principal_ = false; break; }
    }
    if (q_ == 1) { primitive_ = true; return; }
    // chi is imprimitive iff it is trivial on the kernel of reduction mod q/r
    // for some prime r | q: chi(n) = 1 for every n = 1 (mod q/r), gcd(n,q)=1.
    primitive_ = true;
    for (auto& [r, e] : factorize(q_)) {
        (void)e;
        std::uint64_t d = q_ / r;
        bool trivial_on_kernel = true;
        for (std::uint64_t n = 1; n < q_; n += d) {
            if (std::gcd(n, q_) != 1) continue;
            if (std::abs(table_[n] - one) > 1e-12) {
                trivial_on_kernel = false;
                break;
            }
        }
        if (trivial_on_kernel) { primitive_ = false; break; }
    }
}

bool DirichletCharacter::is_real() const {
    for (auto& v : table_)
        if (std::abs(v.imag()) > 1e-12) return false;
    return true;
}

} // namespace itlog
