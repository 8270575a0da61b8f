#ifndef ITLOG_EVAL_CORE_HPP
#define ITLOG_EVAL_CORE_HPP

#include <complex>
#include <memory>
#include <variant>
#include <vector>

#include "itlog/lfunction.hpp"
#include "itlog/region.hpp"

namespace itlog {

using cplx = std::complex<double>;

// ---- Euler–Maclaurin machinery ---------------------------------------------
//
// zeta(s) = sum_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2
//         + sum_{k=1..K} B_{2k}/(2k)! * (s)_{2k-1} * N^{-s-2k+1} + R_K,
// |R_K| <= |first omitted term| * |s+2K+1| / (sigma+2K+1),
// and the same with N -> N+x for the Hurwitz shift x.  The correction series
// behaves like (|s|/(2 pi N))^{2k}, so N is chosen proportional to |t|.

// B_{2k}/(2k)! for k = 1..count (precomputed once, thread-safe).
const std::vector<double>& em_bernoulli_factors();

// Partial-sum length for a target height (keeps the correction ratio ~0.53
// and the total error near 1e-13 for |t| up to ~2e5).
int em_N_for_t(double t);

// Everything *after* the partial sum sum_{n<N} (n+x)^{-s}: the pole term,
// the half term and the Bernoulli corrections, evaluated at y = N + x.
// Returns {value, remainder_bound}.  No pole handling: y^{1-s}/(s-1) is
// computed as is, so callers must keep |s-1| away from 0 themselves (the
// Dirichlet combination instead uses the cancellation-stable variant below).
std::pair<cplx, double> em_completion(cplx s, double y);

// Stable ((y^{1-s} - 1)/(s-1)), the pole term with its principal-character
// singularity removed; finite for every s including s = 1.
cplx em_pole_term_reduced(cplx s, double y);

// expm1(w)/w for complex w, accurate near 0.
cplx expm1_over_w(cplx w);

// One-shot evaluations (pick N from Im s internally).
ApproxValue zeta_em(cplx s);
ApproxValue hurwitz_em(cplx s, double x);

// ---- fixed-height backends ---------------------------------------------------
//
// Keeping t fixed lets the oscillatory factors n^{-it} be cached once; each
// evaluation at a new sigma then costs one real exp per term.  These back the
// branch tracker, whose walks move horizontally.

class FixedTZeta {
public:
    FixedTZeta(double t);
    ApproxValue eval(double sigma) const;
    double t() const { return t_; }
    int N() const { return N_; }

private:
    double t_;
    int N_;
    std::vector<double> logn_;  // log n, n = 1..N-1 (index n)
    std::vector<cplx> nit_;     // n^{-it}
};

class FixedTDirichlet {
public:
    FixedTDirichlet(const DirichletCharacter& chi, double t);
    ApproxValue eval(double sigma) const;

private:
    DirichletCharacter chi_;
    double t_;
    int N_;
    // per residue a (1..q with chi(a) != 0): shifted logs/phases for
    // n + a/q, n = 0..N-1, plus the completion point y_a = N + a/q
    struct Residue {
        cplx chi_a;
        double x;
        std::vector<double> logy;
        std::vector<cplx> yit;
        double log_ycomp;
        cplx ycomp_it;
    };
    std::vector<Residue> residues_;
};

class FixedTCustom {
public:
    FixedTCustom(const LFunction& L, double t);
    // value of L(sigma+it) for sigma > 1 + delta via exp of the file series
    ApproxValue eval(double sigma) const;
    // the log series itself (principal branch by construction)
    ApproxValue log_eval(double sigma) const;

private:
    const LFunction* L_;
    double t_;
    struct Term {
        cplx b;
        double logn;
        cplx nit;
    };
    std::vector<Term> terms_;
};

using FixedTBackend = std::variant<FixedTZeta, FixedTDirichlet, FixedTCustom>;

FixedTBackend make_fixed_t_backend(const LFunction& L, double t);
ApproxValue fixed_t_eval(const FixedTBackend& b, double sigma);

// Minimum abscissa the backend can reach (custom files stop at 1 + delta).
double backend_min_sigma(const LFunction& L);

} // namespace itlog

#endif
