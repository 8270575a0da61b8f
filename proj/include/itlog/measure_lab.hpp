#ifndef ITLOG_MEASURE_LAB_HPP
#define ITLOG_MEASURE_LAB_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "itlog/evaluator.hpp"
#include "itlog/lfunction.hpp"
#include "itlog/region.hpp"

namespace itlog {

// One tabulated nontrivial zero beta + i*gamma.
struct ZeroEntry {
    double beta;
    double gamma;
};

struct ZeroSet {
    std::vector<ZeroEntry> entries; // strictly ascending gamma
    std::string source;
    bool rh_verified = false; // every listed beta equals 1/2
};

// Text zero table: '#' starts a comment; data lines are either a single
// ordinate (beta = 1/2 implied) or 'beta gamma'.  The two layouts cannot be
// mixed within one file.  Ordinates must be strictly ascending and betas lie
// in (0,1).  An empty table is valid (no exclusions anywhere).
ZeroSet load_zeros(const std::string& path);

// Number of tabulated zeros with beta > sigma and |gamma| < T.
std::size_t count_zeros_N(const ZeroSet& Z, double sigma, double T);

// Finite union of disjoint intervals, kept sorted; supports window removal
// and arc-length addressing (used to draw shifts from an admissible set).
class IntervalSet {
public:
    IntervalSet() = default;
    static IntervalSet interval(double lo, double hi);

    // Removes the open window (lo, hi); no-op when lo >= hi.
    void subtract(double lo, double hi);
    bool contains(double x) const;
    bool empty() const { return iv_.empty(); }
    double total_measure() const;
    // Point at distance u from the left end, measured along the set
    // (0 <= u <= total_measure, clamped at the ends).
    double at_measure(double u) const;
    const std::vector<std::pair<double, double>>& intervals() const {
        return iv_;
    }

private:
    std::vector<std::pair<double, double>> iv_;
};

// The admissible shift set inside [T, 2T]: removes (gamma - tau0 - delta,
// gamma - tau0 + delta) for every tabulated zero with beta > sigma0, and the
// window around the pole shift (-tau0 - delta, -tau0 + delta) when the
// function has one.  Entries are used as stored; supply negative ordinates
// explicitly if the scan range makes them relevant.
IntervalSet admissible_shifts(const ZeroSet& Z, const CompactSetContext& K,
                              double T, double delta, bool pole);

enum class SampleScheme { equispaced, random };

// A matrix of evaluations: rows[i][j] is the value attached to draw i at
// eval_points[j].  Provenance is "shift-QT" (vertical-shift rows) or
// "montecarlo-Q" (random-model rows).
struct SampleSet {
    std::vector<cplx> eval_points;
    std::vector<std::vector<cplx>> rows;
    std::string provenance;
    std::vector<double> shifts; // tau of each kept row (shift sampling only)
    std::uint64_t seed = 0;
    std::uint64_t prime_bound = 0; // random-model sampling only
    std::size_t dropped = 0;       // rows lost to continuation failures
};

// n shifted rows (H_m(p + i tau))_p with tau drawn from the shift set either
// equispaced in arc length (midpoints, deterministic) or uniformly at random
// (seeded).  Rows where continuation fails anywhere are dropped and counted;
// throws numeric_error when every row failed.
SampleSet sample_QT(const LFunction& L, int m, const std::vector<cplx>& points,
                    const IntervalSet& shifts, std::size_t n,
                    SampleScheme scheme = SampleScheme::equispaced,
                    std::uint64_t seed = 0, const EvalOptions& opts = {});

// n random-model rows with phase seeds seed+0 .. seed+n-1.  Points must have
// Re > 1/2 + 0.05 (the mean-square convergence threshold plus margin).
SampleSet sample_Q(const LFunction& L, int m, const std::vector<cplx>& points,
                   std::size_t n, std::uint64_t seed,
                   std::uint64_t prime_bound);

// Two-sample energy statistic 2 E|a-b| - E|a-a'| - E|b-b'| with rows read as
// vectors in R^{2 * #points}; the means run over all ordered pairs including
// equal indices, so identical samples give exactly zero.
double energy_distance(const SampleSet& A, const SampleSet& B);

// Seeded permutation p-value for the observed energy distance (diagnostic
// only; never a pass/fail criterion by itself).
double energy_permutation_pvalue(const SampleSet& A, const SampleSet& B,
                                 int permutations, std::uint64_t seed);

// Fraction of rows whose sup over the sample points lying inside K of
// |row - P| is strictly below eps.
double ball_frequency(const SampleSet& S, const Polynomial& P,
                      const CompactSetContext& K, double eps);

struct WitnessHit {
    double tau;
    double sup_error; // confirmed sup over the evaluation grid
};

// Scan knobs.  The two polynomial lengths drive the pre-filter cascade; the
// slacks widen eps for the cheap stages so that truncation error cannot
// reject a genuine witness.  branch_guard bounds how far the confirmed log
// may sit from the stage-two polynomial before the scan distrusts the cheap
// branch choice and re-derives it by horizontal continuation.
struct WitnessOptions {
    double y1 = 1000.0;
    double y2 = 20000.0;
    double slack1 = 0.30;
    double slack2 = 0.10;
    double branch_guard = 0.8;
    int rect_grid = 7;
    int disk_boundary = 16;
    std::uint64_t refresh_every = 65536; // recurrence re-anchoring period
    EvalOptions eval;
};

struct WitnessReport {
    Polynomial target;
    CompactSetContext K;
    double epsilon = 0.0;
    std::vector<WitnessHit> hits; // ascending tau
    double scanned_measure = 0.0;
    double density_estimate = 0.0; // merged step-width boxes / scanned
    std::uint64_t scanned_steps = 0;
    std::uint64_t stage1_passes = 0;
    std::uint64_t confirm_evals = 0;
    std::uint64_t branch_fallbacks = 0;
};

// Lattice scan of the shift set (spacing `step`, midpoint offset) for shifts
// where sup over the evaluation grid of |H_m(s + i tau) - target(s)| < eps.
// Three stages per shift: a y1-length polynomial held up to date by one
// complex rotation per term per step, a y2-length polynomial computed afresh
// on stage-one passes, and exact confirmation.  For m = 0 on the built-in
// zeta backend the confirmation shares one n^{-i tau} pass across the whole
// grid; other functions and m >= 1 confirm through the full evaluator, which
// is accurate but slow — keep those scans short.  Deterministic for fixed
// inputs.
WitnessReport witness_search(const LFunction& L, int m,
                             const Polynomial& target,
                             const CompactSetContext& K,
                             const IntervalSet& shifts, double step,
                             double eps, const WitnessOptions& opts = {});

} // namespace itlog

#endif
