#ifndef ITLOG_LFUNCTION_HPP
#define ITLOG_LFUNCTION_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "itlog/characters.hpp"
#include "itlog/primes.hpp"

namespace itlog {

// An L-function presented by its local logarithmic coefficients b(p^k),
// i.e. log L(s) = sum_p sum_k b(p^k) p^{-ks} on the half-plane of absolute
// convergence.  Dirichlet coefficients a(n) are always *derived* from b by
// exponentiating the local series, so the Euler product is consistent by
// construction.  Instances are immutable after construction; the a(n) memo
// is mutex-guarded so concurrent readers are safe.
class LFunction {
public:
    enum class Kind { zeta, dirichlet, coeff_file };

    // --- built-in instances -------------------------------------------------
    static LFunction zeta();
    // L(s, chi) for chi primitive and non-principal (validated).
    static LFunction dirichlet(const DirichletCharacter& chi, std::string name);
    static LFunction dirichlet(std::uint64_t q, std::uint64_t index);
    static LFunction kronecker(std::int64_t D);
    // Custom instance from a coefficient file (format: see README / cli docs).
    static LFunction from_coeff_file(const std::string& path);

    // --- metadata ------------------------------------------------------------
    const std::string& name() const { return name_; }
    Kind kind() const { return kind_; }
    double degree() const { return degree_; }
    bool has_pole_at_one() const { return pole_; }
    double theta() const { return theta_; }
    double ramanujan_C() const { return ramanujan_C_; }
    std::optional<double> kappa_hint() const { return kappa_hint_; }
    double sigma_L() const { return sigma_L_; }
    // Overrides the continuation abscissa (e.g. 1/2 under the generalized
    // density hypothesis); must stay in [1/2, 1).
    void set_sigma_L(double v);
    const DirichletCharacter* character() const {
        return chi_ ? &*chi_ : nullptr;
    }
    // Largest prime power carrying a nonzero b in a coefficient file (0 for
    // built-ins, whose local series are unbounded).
    std::uint64_t coeff_support_bound() const { return file_support_bound_; }

    // --- coefficients ---------------------------------------------------------
    // b(p^k); total over primes p and k >= 1 (0 where unsupported).
    std::complex<double> b_coeff(std::uint64_t p, unsigned k) const;
    // Lambda_L(n) = b(p^k) * k * log p on prime powers, 0 otherwise.
    std::complex<double> von_mangoldt(std::uint64_t n) const;
    // a(n): multiplicative, a(p^k) = k-th coefficient of exp(sum_j b(p,j) x^j).
    std::complex<double> dirichlet_coefficient(std::uint64_t n) const;

    // (1/pi(x)) * sum_{p <= x} |a(p)|^2, the prime mean-square at x.
    double prime_mean_square(double x) const;

    // Emits a warning line (returns it) if sampled |b(p,k)| exceed the
    // declared Ramanujan bound C * p^{k*theta}; empty string when clean.
    std::string ramanujan_diagnostic(std::uint64_t bound = 1000000) const;

private:
    LFunction() = default;

    std::string name_;
    Kind kind_ = Kind::zeta;
    double degree_ = 1.0;
    bool pole_ = true;
    double theta_ = 0.0;
    double ramanujan_C_ = 1.0;
    std::optional<double> kappa_hint_;
    double sigma_L_ = 0.5;
    std::optional<DirichletCharacter> chi_;

    // coefficient-file payload: (p, k) -> b, plus the largest supported p^k
    std::map<std::pair<std::uint64_t, unsigned>, std::complex<double>> file_b_;
    std::uint64_t file_support_bound_ = 0;

    struct ACache {
        std::mutex mutex;
        std::map<std::uint64_t, std::complex<double>> values;
    };
    std::shared_ptr<ACache> a_cache_ = std::make_shared<ACache>();

    std::complex<double> a_prime_power(std::uint64_t p, unsigned k) const;
};

// sigma_L default: 1/2 under the density hypothesis switch, and always 1/2
// for zeta; otherwise the unconditional 1 - 1/(4(d+3)).
double default_sigma_L(const LFunction& L, bool assume_gdh);
double default_sigma_L(double degree, bool assume_gdh, bool is_zeta);

// Shared, lazily grown prime-power tables keyed by bound (guarded; callers
// may hold the returned shared_ptr across threads).
std::shared_ptr<const std::vector<PrimePower>> shared_prime_powers(
    std::uint64_t bound);
std::shared_ptr<const PrimeTable> shared_prime_table(std::uint64_t bound);

} // namespace itlog

#endif
