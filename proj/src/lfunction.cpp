#include "itlog/lfunction.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "itlog/errors.hpp"

namespace itlog {

namespace {

// factor n by trial division; n is at most ~10^7 in every caller, so the
// sqrt(n) walk is cheap enough without a table
std::vector<std::pair<std::uint64_t, unsigned>> factor_u64(std::uint64_t n) {
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

} // namespace

LFunction LFunction::zeta() {
    LFunction L;
    L.name_ = "zeta";
    L.kind_ = Kind::zeta;
    L.degree_ = 1.0;
    L.pole_ = true;
    L.theta_ = 0.0;
    L.ramanujan_C_ = 1.0;
    L.kappa_hint_ = 1.0;
    L.sigma_L_ = 0.5; // zeta admits the strongest density input
    return L;
}

LFunction LFunction::dirichlet(const DirichletCharacter& chi,
                               std::string name) {
    if (chi.is_principal())
        throw validation_error(
            "built-in Dirichlet L requires a non-principal character");
    if (!chi.is_primitive())
        throw validation_error(
            "built-in Dirichlet L requires a primitive character (the given "
            "character is induced from a smaller modulus)");
    LFunction L;
    L.name_ = std::move(name);
    L.kind_ = Kind::dirichlet;
    L.degree_ = 1.0;
    L.pole_ = false;
    L.theta_ = 0.0;
    L.ramanujan_C_ = 1.0;
    L.kappa_hint_ = 1.0;
    L.chi_ = chi;
    L.sigma_L_ = default_sigma_L(1.0, false, false);
    return L;
}

LFunction LFunction::dirichlet(std::uint64_t q, std::uint64_t index) {
    std::ostringstream name;
    name << "dirichlet-" << q << "." << index;
    return dirichlet(DirichletCharacter::by_index(q, index), name.str());
}

LFunction LFunction::kronecker(std::int64_t D) {
    std::ostringstream name;
    name << "kronecker" << D;
    return dirichlet(DirichletCharacter::kronecker(D), name.str());
}

LFunction LFunction::from_coeff_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open coefficient file: " + path);

    LFunction L;
    L.kind_ = Kind::coeff_file;
    L.pole_ = false;
    L.theta_ = 0.0;
    L.degree_ = 1.0;
    // name from the file stem
    std::string stem = path;
    if (auto pos = stem.find_last_of("/\\"); pos != std::string::npos)
        stem = stem.substr(pos + 1);
    if (auto pos = stem.find_last_of('.'); pos != std::string::npos)
        stem = stem.substr(0, pos);
    L.name_ = "file-" + stem;

    bool sigma_given = false;
    std::string line;
    std::size_t lineno = 0;
    PrimeTable small_primes(100000);
    while (std::getline(in, line)) {
        ++lineno;
        auto fail = [&](const std::string& why) {
            std::ostringstream msg;
            msg << path << ":" << lineno << ": " << why;
            throw parse_error(msg.str());
        };
        // strip comments handled below for '#' header keys
        std::string body = line;
        if (!body.empty() && body[0] == '#') {
            std::string rest = body.substr(1);
            // header metadata: key=value tokens
            std::istringstream hs(rest);
            std::string tok;
            while (hs >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                try {
                    if (key == "degree") L.degree_ = std::stod(val);
                    else if (key == "theta") L.theta_ = std::stod(val);
                    else if (key == "pole") L.pole_ = (std::stoi(val) != 0);
                    else if (key == "sigma_L") {
                        L.sigma_L_ = std::stod(val);
                        sigma_given = true;
                    } else if (key == "C") L.ramanujan_C_ = std::stod(val);
                    else if (key == "kappa") L.kappa_hint_ = std::stod(val);
                    else fail("unknown header key '" + key + "'");
                } catch (const std::invalid_argument&) {
                    fail("bad numeric value for header key '" + key + "'");
                }
            }
            continue;
        }
        if (body.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream rs(body);
        std::uint64_t p;
        unsigned k;
        double re, im;
        if (!(rs >> p >> k >> re >> im)) fail("expected 'p k re_b im_b'");
        std::string extra;
        if (rs >> extra) fail("trailing tokens after 'p k re_b im_b'");
        if (k < 1) fail("power k must be >= 1");
        bool prime = false;
        if (p <= small_primes.bound()) prime = small_primes.is_prime(p);
        else {
            std::uint64_t q;
            unsigned e;
            prime = as_prime_power(p, small_primes, q, e) && e == 1;
        }
        if (!prime) fail("first column must be prime");
        double logp = std::log(static_cast<double>(p));
        if (static_cast<double>(k) * logp > std::log(1e18))
            fail("p^k overflows the supported range");
        auto key = std::make_pair(p, k);
        if (L.file_b_.count(key)) fail("duplicate (p, k) record");
        L.file_b_[key] = {re, im};
        double pk = std::pow(static_cast<double>(p), static_cast<double>(k));
        if (pk > static_cast<double>(L.file_support_bound_))
            L.file_support_bound_ = static_cast<std::uint64_t>(pk + 0.5);
    }
    if (L.degree_ < 0) throw validation_error(path + ": degree must be >= 0");
    if (L.theta_ < 0 || L.theta_ >= 0.5)
        throw validation_error(path + ": theta must lie in [0, 1/2)");
    if (!sigma_given) L.sigma_L_ = default_sigma_L(L.degree_, false, false);
    if (L.sigma_L_ < 0.5 || L.sigma_L_ >= 1.0)
        throw validation_error(path + ": sigma_L must lie in [1/2, 1)");
    return L;
}

std::complex<double> LFunction::b_coeff(std::uint64_t p, unsigned k) const {
    switch (kind_) {
        case Kind::zeta:
            return {1.0 / static_cast<double>(k), 0.0};
        case Kind::dirichlet: {
            std::complex<double> c = (*chi_)(p);
            if (c == std::complex<double>(0.0, 0.0)) return {0.0, 0.0};
            std::complex<double> ck = c;
            for (unsigned j = 1; j < k; ++j) ck *= c;
            return ck / static_cast<double>(k);
        }
        case Kind::coeff_file: {
            auto it = file_b_.find({p, k});
            return it == file_b_.end() ? std::complex<double>(0.0, 0.0)
                                       : it->second;
        }
    }
    return {0.0, 0.0};
}

std::complex<double> LFunction::von_mangoldt(std::uint64_t n) const {
    if (n < 2) return {0.0, 0.0};
    auto f = factor_u64(n);
    if (f.size() != 1) return {0.0, 0.0};
    auto [p, k] = f[0];
    return b_coeff(p, k) * (static_cast<double>(k) *
                            std::log(static_cast<double>(p)));
}

std::complex<double> LFunction::a_prime_power(std::uint64_t p,
                                              unsigned k) const {
    // a(p^j) for j <= k from exp of the local log-series:
    // A = exp(B), A_0 = 1, j*A_j = sum_{i=1..j} i*B_i*A_{j-i}.
    std::vector<std::complex<double>> B(k + 1), A(k + 1);
    for (unsigned j = 1; j <= k; ++j) B[j] = b_coeff(p, j);
    A[0] = 1.0;
    for (unsigned j = 1; j <= k; ++j) {
        std::complex<double> acc = 0.0;
        for (unsigned i = 1; i <= j; ++i)
            acc += static_cast<double>(i) * B[i] * A[j - i];
        A[j] = acc / static_cast<double>(j);
    }
    return A[k];
}

std::complex<double> LFunction::dirichlet_coefficient(std::uint64_t n) const {
    if (n < 1) throw validation_error("dirichlet_coefficient: n must be >= 1");
    if (n == 1) return {1.0, 0.0};
    {
        std::lock_guard<std::mutex> lock(a_cache_->mutex);
        auto it = a_cache_->values.find(n);
        if (it != a_cache_->values.end()) return it->second;
    }
    std::complex<double> a = 1.0;
    for (auto& [p, k] : factor_u64(n)) a *= a_prime_power(p, k);
    {
        std::lock_guard<std::mutex> lock(a_cache_->mutex);
        a_cache_->values.emplace(n, a);
    }
    return a;
}

double LFunction::prime_mean_square(double x) const {
    if (x < 2) throw validation_error("prime_mean_square: x must be >= 2");
    auto table = shared_prime_table(static_cast<std::uint64_t>(x));
    double sum = 0.0;
    std::size_t count = 0;
    for (std::uint64_t p : table->primes()) {
        if (static_cast<double>(p) > x) break;
        sum += std::norm(b_coeff(p, 1)); // a(p) = b(p)
        ++count;
    }
    if (count == 0) throw validation_error("prime_mean_square: no primes <= x");
    return sum / static_cast<double>(count);
}

std::string LFunction::ramanujan_diagnostic(std::uint64_t bound) const {
    auto pps = shared_prime_powers(bound);
    for (const auto& pp : *pps) {
        double cap = ramanujan_C_ *
                     std::pow(static_cast<double>(pp.n), theta_);
        double mag = std::abs(b_coeff(pp.p, pp.k));
        if (mag > cap * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg << "warning: |b(" << pp.p << "," << pp.k << ")| = " << mag
                << " exceeds declared bound C*p^(k*theta) = " << cap;
            return msg.str();
        }
    }
    return {};
}

void LFunction::set_sigma_L(double v) {
    if (!(v >= 0.5 && v < 1.0))
        throw validation_error("sigma_L must lie in [1/2, 1)");
    sigma_L_ = v;
}

double default_sigma_L(double degree, bool assume_gdh, bool is_zeta) {
    if (is_zeta || assume_gdh) return 0.5;
    return 1.0 - 1.0 / (4.0 * (degree + 3.0));
}

double default_sigma_L(const LFunction& L, bool assume_gdh) {
    return default_sigma_L(L.degree(), assume_gdh,
                           L.kind() == LFunction::Kind::zeta);
}

namespace {
struct SharedTables {
    std::mutex mutex;
    std::map<std::uint64_t, std::shared_ptr<const PrimeTable>> prime_tables;
    std::map<std::uint64_t, std::shared_ptr<const std::vector<PrimePower>>>
        power_tables;
};
SharedTables& shared_tables() {
    static SharedTables t;
    return t;
}
} // namespace

std::shared_ptr<const PrimeTable> shared_prime_table(std::uint64_t bound) {
    auto& t = shared_tables();
    std::lock_guard<std::mutex> lock(t.mutex);
    // reuse the smallest table that covers the request
    auto it = t.prime_tables.lower_bound(bound);
    if (it != t.prime_tables.end()) return it->second;
    auto made = std::make_shared<const PrimeTable>(bound);
    t.prime_tables.emplace(bound, made);
    return made;
}

std::shared_ptr<const std::vector<PrimePower>> shared_prime_powers(
    std::uint64_t bound) {
    auto& t = shared_tables();
    {
        std::lock_guard<std::mutex> lock(t.mutex);
        auto it = t.power_tables.find(bound);
        if (it != t.power_tables.end()) return it->second;
    }
    auto table = shared_prime_table(bound);
    auto made = std::make_shared<const std::vector<PrimePower>>(
        prime_powers_up_to(bound, *table));
    std::lock_guard<std::mutex> lock(t.mutex);
    t.power_tables.emplace(bound, made);
    return made;
}

} // namespace itlog
