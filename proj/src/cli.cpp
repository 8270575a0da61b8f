#include "itlog/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "itlog/errors.hpp"
#include "itlog/evaluator.hpp"
#include "itlog/lfunction.hpp"
#include "itlog/measure_lab.hpp"
#include "itlog/parallel.hpp"
#include "itlog/random_model.hpp"
#include "itlog/region.hpp"
#include "itlog/smoothing.hpp"
#include "itlog/version.hpp"

namespace itlog {
namespace {

using nlohmann::json;

// ---- small parsers ---------------------------------------------------------------------

double parse_real(const std::string& text, const std::string& flag) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw parse_error(flag + ": cannot parse number '" + text + "'");
    return v;
}

// a+bi / a-bi with no spaces; also plain reals and pure imaginaries ('2i').
cplx parse_complex(const std::string& text, const std::string& flag) {
    if (text.empty()) throw parse_error(flag + ": empty complex number");
    if (text.back() != 'i') return {parse_real(text, flag), 0.0};
    std::string body = text.substr(0, text.size() - 1);
    // split at the last +/- that is not an exponent sign and not leading
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        char c = body[i];
        if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) {
        // pure imaginary
        if (body.empty() || body == "+") return {0.0, 1.0};
        if (body == "-") return {0.0, -1.0};
        return {0.0, parse_real(body, flag)};
    }
    double re = parse_real(body.substr(0, split), flag);
    std::string imtok = body.substr(split);
    double im = imtok == "+"   ? 1.0
                : imtok == "-" ? -1.0
                               : parse_real(imtok, flag);
    return {re, im};
}

std::vector<cplx> parse_complex_list(const std::vector<std::string>& toks,
                                     const std::string& flag) {
    std::vector<cplx> out;
    out.reserve(toks.size());
    for (const auto& t : toks) out.push_back(parse_complex(t, flag));
    return out;
}

// comma-separated coefficients, constant term first
Polynomial parse_poly(const std::vector<std::string>& toks,
                      const std::string& flag) {
    if (toks.empty()) throw parse_error(flag + ": empty polynomial");
    Polynomial P;
    for (const auto& t : toks) P.coeffs.push_back(parse_complex(t, flag));
    return P;
}

std::pair<double, double> parse_range(const std::string& text,
                                      const std::string& flag) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw parse_error(flag + ": expected 'lo:hi', got '" + text + "'");
    double lo = parse_real(text.substr(0, colon), flag);
    double hi = parse_real(text.substr(colon + 1), flag);
    if (!(hi > lo)) throw parse_error(flag + ": range is empty");
    return {lo, hi};
}

std::uint64_t parse_u64(const std::string& text, const std::string& flag) {
    const char* begin = text.c_str();
    char* end = nullptr;
    unsigned long long v = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw parse_error(flag + ": cannot parse integer '" + text + "'");
    return v;
}

// name forms: zeta | dirichlet:q:index | kronecker:D | <coefficient file>
LFunction make_lfunction(const std::string& spec, bool gdh) {
    LFunction L = [&] {
        if (spec == "zeta") return LFunction::zeta();
        if (spec.rfind("dirichlet:", 0) == 0) {
            std::string rest = spec.substr(10);
            auto colon = rest.find(':');
            if (colon == std::string::npos)
                throw parse_error("--l: expected dirichlet:q:index");
            return LFunction::dirichlet(parse_u64(rest.substr(0, colon), "--l"),
                                        parse_u64(rest.substr(colon + 1),
                                                  "--l"));
        }
        if (spec.rfind("kronecker:", 0) == 0) {
            double d = parse_real(spec.substr(10), "--l");
            return LFunction::kronecker(std::int64_t(d));
        }
        return LFunction::from_coeff_file(spec);
    }();
    if (gdh) L.set_sigma_L(0.5);
    return L;
}

// ---- output plumbing -------------------------------------------------------------------

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json base_output(const std::string& command, const json& config) {
    json out;
    out["command"] = command;
    out["config"] = config;
    out["config_hash"] = hash_hex(fnv1a(config.dump()));
    out["version"] = ITLOG_VERSION;
    return out;
}

// stdout carries the summary line; --out duplicates it to a file whose
// sidecar (<out>.meta) holds the wall-clock stamp, keeping the payload
// byte-reproducible
void emit_output(const json& out, const std::string& out_path) {
    std::string line = out.dump();
    std::fputs(line.c_str(), stdout);
    std::fputc('\n', stdout);
    if (out_path.empty()) return;
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw validation_error("--out: cannot open " + out_path);
    f << line << "\n";
    std::ofstream meta(out_path + ".meta", std::ios::binary);
    meta << json{{"written_at_unix",
                  static_cast<std::int64_t>(std::time(nullptr))}}
                .dump()
         << "\n";
}

void write_sample_csv(const SampleSet& S, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw validation_error("--csv: cannot open " + path);
    f << "index,shift";
    for (std::size_t j = 0; j < S.eval_points.size(); ++j)
        f << ",re" << j << ",im" << j;
    f << "\n";
    char buf[64];
    for (std::size_t i = 0; i < S.rows.size(); ++i) {
        double shift = i < S.shifts.size() ? S.shifts[i] : double(S.seed + i);
        std::snprintf(buf, sizeof buf, "%zu,%.17g", i, shift);
        f << buf;
        for (cplx v : S.rows[i]) {
            std::snprintf(buf, sizeof buf, ",%.17g,%.17g", v.real(), v.imag());
            f << buf;
        }
        f << "\n";
    }
}

// ---- shared flag bundles ---------------------------------------------------------------

struct ShapeFlags {
    std::vector<double> disk; // cx, cy, r
    std::vector<double> rect; // re_lo, re_hi, im_lo, im_hi

    void attach(CLI::App* sub) {
        sub->add_option("--disk", disk,
                        "target disk as center_re,center_im,radius")
            ->expected(3)
            ->delimiter(',');
        sub->add_option("--rect", rect,
                        "target rectangle as re_lo,re_hi,im_lo,im_hi")
            ->expected(4)
            ->delimiter(',');
    }

    CompactShape shape() const {
        if (disk.empty() == rect.empty())
            throw validation_error(
                "provide exactly one of --disk or --rect");
        if (!disk.empty()) return Disk{{disk[0], disk[1]}, disk[2]};
        return Rect{rect[0], rect[1], rect[2], rect[3]};
    }

    json echo() const {
        json j;
        j["disk"] = disk;
        j["rect"] = rect;
        return j;
    }
};

struct EvalFlags {
    double quad_tol = 1e-9;
    double sigma_c = 3.0;
    std::uint64_t series_n = 200000;

    void attach(CLI::App* sub) {
        sub->add_option("--quad-tol", quad_tol,
                        "absolute quadrature tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_option("--sigma-c", sigma_c,
                        "series/quadrature crossover abscissa");
        sub->add_option("--series-n", series_n,
                        "coefficient series truncation")
            ->check(CLI::PositiveNumber);
    }

    EvalOptions options() const {
        EvalOptions o;
        o.quad_tol = quad_tol;
        o.sigma_c = sigma_c;
        o.anchor_sigma = std::max(3.0, sigma_c);
        o.series_N = series_n;
        return o;
    }

    void echo(json& cfg) const {
        cfg["quad_tol"] = quad_tol;
        cfg["sigma_c"] = sigma_c;
        cfg["series_n"] = series_n;
    }
};

// Zero-table resolution: explicit flag, else $ITLOG_ZERO_DIR/<name>_zeros.txt,
// else an empty table with a loud warning (all shifts treated admissible).
ZeroSet resolve_zeros(const std::string& flag_path, const LFunction& L,
                      json& out) {
    if (!flag_path.empty()) {
        ZeroSet Z = load_zeros(flag_path);
        out["zero_table"] = flag_path;
        return Z;
    }
    if (const char* dir = std::getenv("ITLOG_ZERO_DIR")) {
        std::string guess = std::string(dir) + "/" +
                            (L.kind() == LFunction::Kind::zeta
                                 ? std::string("zeta")
                                 : L.name()) +
                            "_zeros.txt";
        if (std::ifstream probe(guess); probe) {
            ZeroSet Z = load_zeros(guess);
            out["zero_table"] = guess;
            return Z;
        }
    }
    out["zero_table"] = "";
    out["warning"] =
        "no zero table found: treating every shift as admissible "
        "(holomorphy of the shifted windows is unverified)";
    std::fprintf(stderr, "warning: no zero table for %s; no shift windows "
                         "are excluded\n",
                 L.name().c_str());
    ZeroSet Z;
    Z.rh_verified = false;
    return Z;
}

// shift set on an explicit [lo, hi] base with the standard exclusions
IntervalSet shifts_on_range(const ZeroSet& Z, const CompactSetContext& K,
                            double lo, double hi, double delta, bool pole) {
    IntervalSet S = IntervalSet::interval(lo, hi);
    for (const ZeroEntry& z : Z.entries)
        if (z.beta > K.sigma0)
            S.subtract(z.gamma - K.tau0 - delta, z.gamma - K.tau0 + delta);
    if (pole) S.subtract(-K.tau0 - delta, -K.tau0 + delta);
    return S;
}

json interval_json(const IntervalSet& S) {
    json arr = json::array();
    for (auto [a, b] : S.intervals()) arr.push_back(json::array({a, b}));
    return arr;
}

// mean magnitude and mean square magnitude per evaluation point
void sample_stats(const SampleSet& S, json& out) {
    json means = json::array(), sqmeans = json::array();
    for (std::size_t j = 0; j < S.eval_points.size(); ++j) {
        cplx mean{0.0, 0.0};
        double sq = 0.0;
        for (const auto& row : S.rows) {
            mean += row[j];
            sq += std::norm(row[j]);
        }
        mean /= double(S.rows.size());
        sq /= double(S.rows.size());
        means.push_back(complex_json(mean));
        sqmeans.push_back(sq);
    }
    out["mean"] = means;
    out["mean_square"] = sqmeans;
    out["rows"] = S.rows.size();
    out["dropped"] = S.dropped;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"numerical laboratory for iterated integrals of log L"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "worker threads (results identical)")
        ->check(CLI::PositiveNumber);

    // shared storage; only the parsed subcommand reads its slice
    std::string lspec = "zeta", out_path, csv_path, zeros_path, phases_out;
    bool gdh = false;
    int m = 0;
    EvalFlags ef;
    ShapeFlags shape;
    std::string s_text, tau_text;
    std::vector<std::string> point_texts, target_texts;
    std::uint64_t seed = 1, prime_bound = 100000, n = 100;
    double step = 0.05, eps = 0.3, delta = -1.0, T = 10000.0, y = 1000.0;
    std::vector<double> x_values = {64.0, 256.0, 1024.0, 4096.0};
    std::string scheme = "equispaced";
    int sweeps = 12, circle_grid = 64, permutations = 0, m_random = -1;
    bool series_only = false;
    double sigma_count = 0.55, tmax_count = -1.0;
    double y1 = 1000.0, y2 = 20000.0;

    auto add_common = [&](CLI::App* sub, bool with_l = true) {
        if (with_l)
            sub->add_option("--l", lspec,
                            "L-function: zeta | dirichlet:q:index | "
                            "kronecker:D | coefficient file");
        sub->add_flag("--gdh", gdh,
                      "assume the density hypothesis (sigma_L = 1/2)");
        sub->add_option("--out", out_path, "write the JSON summary here too");
        sub->add_option("--csv", csv_path, "write row data as CSV");
        // let app-level flags (--threads) appear after the subcommand name
        sub->fallthrough();
    };

    auto* c_eval = app.add_subcommand("eval", "evaluate the m-fold integral");
    add_common(c_eval);
    c_eval->add_option("--m", m, "integration order")->check(
        CLI::NonNegativeNumber);
    c_eval->add_option("--s", s_text, "evaluation point a+bi")->required();
    c_eval->add_flag("--series-only", series_only,
                     "use the truncated coefficient series (Re s > 1)");
    ef.attach(c_eval);

    auto* c_mellin = app.add_subcommand("mellin",
                                        "transform of the smoothing bump");
    add_common(c_mellin, false);
    c_mellin->add_option("--s", s_text, "evaluation point a+bi")->required();

    auto* c_zeros = app.add_subcommand("zeros-report",
                                       "summarize a zero table");
    add_common(c_zeros);
    c_zeros->add_option("--zeros", zeros_path, "zero table path");
    c_zeros->add_option("--sigma", sigma_count,
                        "count zeros right of this abscissa");
    c_zeros->add_option("--max-t", tmax_count,
                        "count zeros with |ordinate| below this (default: "
                        "all)");

    auto* c_sq = app.add_subcommand("sample-q",
                                    "random-model Monte-Carlo sample");
    add_common(c_sq);
    c_sq->add_option("--m", m, "integration order")
        ->check(CLI::NonNegativeNumber);
    c_sq->add_option("--points", point_texts, "evaluation points a+bi,...")
        ->required()
        ->delimiter(',');
    c_sq->add_option("--n", n, "number of draws")->check(CLI::PositiveNumber);
    c_sq->add_option("--seed", seed, "base seed");
    c_sq->add_option("--prime-bound", prime_bound, "phase primes up to here")
        ->check(CLI::PositiveNumber);

    auto* c_sqt = app.add_subcommand("sample-qt", "vertical-shift sample");
    add_common(c_sqt);
    c_sqt->add_option("--m", m, "integration order")
        ->check(CLI::NonNegativeNumber);
    c_sqt->add_option("--points", point_texts, "evaluation points a+bi,...")
        ->required()
        ->delimiter(',');
    c_sqt->add_option("--n", n, "number of shifts")->check(
        CLI::PositiveNumber);
    c_sqt->add_option("--t-base", T, "shifts drawn from [T, 2T]")
        ->check(CLI::PositiveNumber);
    c_sqt->add_option("--scheme", scheme, "equispaced | random")
        ->check(CLI::IsMember({"equispaced", "random"}));
    c_sqt->add_option("--seed", seed, "seed for the random scheme");
    c_sqt->add_option("--delta", delta,
                      "exclusion half-width (default: height extent + 1)");
    c_sqt->add_option("--zeros", zeros_path, "zero table path");
    shape.attach(c_sqt);
    ef.attach(c_sqt);

    auto* c_cmp = app.add_subcommand(
        "compare", "energy distance between shift and model samples");
    add_common(c_cmp);
    c_cmp->add_option("--m", m, "integration order (shift sample)")
        ->check(CLI::NonNegativeNumber);
    c_cmp->add_option("--m-random", m_random,
                      "integration order of the model sample (default: --m)");
    c_cmp->add_option("--points", point_texts, "evaluation points a+bi,...")
        ->required()
        ->delimiter(',');
    c_cmp->add_option("--n", n, "rows per sample")->check(CLI::PositiveNumber);
    c_cmp->add_option("--t-base", T, "shifts drawn from [T, 2T]")
        ->check(CLI::PositiveNumber);
    c_cmp->add_option("--seed", seed, "model sample seed");
    c_cmp->add_option("--prime-bound", prime_bound, "model phase primes")
        ->check(CLI::PositiveNumber);
    c_cmp->add_option("--permutations", permutations,
                      "permutation count for the diagnostic p-value")
        ->check(CLI::NonNegativeNumber);
    c_cmp->add_option("--delta", delta, "exclusion half-width");
    c_cmp->add_option("--zeros", zeros_path, "zero table path");
    shape.attach(c_cmp);
    ef.attach(c_cmp);

    auto* c_poly = app.add_subcommand(
        "poly-check", "truncated-polynomial error against the evaluator");
    add_common(c_poly);
    c_poly->add_option("--m", m, "integration order")
        ->check(CLI::NonNegativeNumber);
    c_poly->add_option("--y", y, "polynomial length")->check(
        CLI::PositiveNumber);
    c_poly->add_option("--n", n, "number of shifts")->check(
        CLI::PositiveNumber);
    c_poly->add_option("--t-base", T, "shifts drawn from [T, 2T]")
        ->check(CLI::PositiveNumber);
    c_poly->add_option("--delta", delta, "exclusion half-width");
    c_poly->add_option("--zeros", zeros_path, "zero table path");
    shape.attach(c_poly);
    ef.attach(c_poly);

    auto* c_smooth = app.add_subcommand(
        "smooth-check", "smoothed-sum error against the evaluator");
    add_common(c_smooth);
    c_smooth->add_option("--m", m, "integration order")
        ->check(CLI::NonNegativeNumber);
    c_smooth->add_option("--x-values", x_values, "smoothing lengths")
        ->delimiter(',');
    c_smooth->add_option("--n", n, "number of shifts")
        ->check(CLI::PositiveNumber);
    c_smooth->add_option("--t-base", T, "shifts drawn from [T, 2T]")
        ->check(CLI::PositiveNumber);
    c_smooth->add_option("--delta", delta, "exclusion half-width");
    c_smooth->add_option("--zeros", zeros_path, "zero table path");
    shape.attach(c_smooth);
    ef.attach(c_smooth);

    auto* c_fit = app.add_subcommand("fit-phases",
                                     "coordinate-descent phase fit");
    add_common(c_fit);
    c_fit->add_option("--m", m, "integration order")
        ->check(CLI::NonNegativeNumber);
    c_fit->add_option("--target", target_texts,
                      "polynomial coefficients, constant first")
        ->required()
        ->delimiter(',');
    c_fit->add_option("--prime-bound", prime_bound, "phases for primes up to")
        ->check(CLI::PositiveNumber);
    c_fit->add_option("--sweeps", sweeps, "descent sweeps")
        ->check(CLI::PositiveNumber);
    c_fit->add_option("--circle-grid", circle_grid,
                      "candidate phases per prime")
        ->check(CLI::PositiveNumber);
    c_fit->add_option("--out-phases", phases_out,
                      "write the fitted assignment here");
    shape.attach(c_fit);

    auto* c_wit = app.add_subcommand("witness",
                                     "scan shifts for target approximation");
    add_common(c_wit);
    c_wit->add_option("--m", m, "integration order")
        ->check(CLI::NonNegativeNumber);
    c_wit->add_option("--target", target_texts,
                      "polynomial coefficients, constant first")
        ->required()
        ->delimiter(',');
    c_wit->add_option("--tau", tau_text, "scan range lo:hi")->required();
    c_wit->add_option("--step", step, "scan lattice spacing")
        ->check(CLI::PositiveNumber);
    c_wit->add_option("--eps", eps, "approximation radius")
        ->check(CLI::PositiveNumber);
    c_wit->add_option("--delta", delta, "exclusion half-width");
    c_wit->add_option("--zeros", zeros_path, "zero table path");
    c_wit->add_option("--y1", y1, "stage-one polynomial length")
        ->check(CLI::PositiveNumber);
    c_wit->add_option("--y2", y2, "stage-two polynomial length")
        ->check(CLI::PositiveNumber);
    shape.attach(c_wit);
    ef.attach(c_wit);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev); // CLI11 consumes reversed vectors
        set_max_threads(std::size_t(threads));

        if (c_eval->parsed()) {
            cplx s = parse_complex(s_text, "--s");
            LFunction L = make_lfunction(lspec, gdh);
            json cfg;
            cfg["l"] = lspec;
            cfg["gdh"] = gdh;
            cfg["m"] = m;
            cfg["s"] = complex_json(s);
            cfg["series_only"] = series_only;
            cfg["threads"] = threads;
            ef.echo(cfg);
            ApproxValue v = series_only
                                ? eval_Hm_series(L, m, s, ef.series_n)
                                : eval_Hm(L, m, s, ef.options());
            json out = base_output("eval", cfg);
            out["value"] = complex_json(v.value);
            out["err_bound"] = v.err_bound;
            out["method"] = method_name(v.method);
            emit_output(out, out_path);
            return 0;
        }

        if (c_mellin->parsed()) {
            cplx s = parse_complex(s_text, "--s");
            json cfg;
            cfg["s"] = complex_json(s);
            cfg["threads"] = threads;
            ApproxValue v = mellin_hat(s);
            json out = base_output("mellin", cfg);
            out["value"] = complex_json(v.value);
            out["err_bound"] = v.err_bound;
            out["method"] = method_name(v.method);
            emit_output(out, out_path);
            return 0;
        }

        if (c_zeros->parsed()) {
            LFunction L = make_lfunction(lspec, gdh);
            json cfg;
            cfg["l"] = lspec;
            cfg["zeros"] = zeros_path;
            cfg["sigma"] = sigma_count;
            cfg["max_t"] = tmax_count;
            cfg["threads"] = threads;
            json out = base_output("zeros-report", cfg);
            ZeroSet Z = resolve_zeros(zeros_path, L, out);
            out["entries"] = Z.entries.size();
            out["rh_verified"] = Z.rh_verified;
            if (!Z.entries.empty()) {
                out["gamma_first"] = Z.entries.front().gamma;
                out["gamma_last"] = Z.entries.back().gamma;
            }
            double tmax = tmax_count > 0
                              ? tmax_count
                              : (Z.entries.empty()
                                     ? 0.0
                                     : std::abs(Z.entries.back().gamma) + 1.0);
            out["count_sigma"] = sigma_count;
            out["count_t"] = tmax;
            out["count_right_of_sigma"] =
                count_zeros_N(Z, sigma_count, tmax);
            emit_output(out, out_path);
            return 0;
        }

        if (c_sq->parsed()) {
            LFunction L = make_lfunction(lspec, gdh);
            auto points = parse_complex_list(point_texts, "--points");
            json cfg;
            cfg["l"] = lspec;
            cfg["gdh"] = gdh;
            cfg["m"] = m;
            json pj = json::array();
            for (cplx p : points) pj.push_back(complex_json(p));
            cfg["points"] = pj;
            cfg["n"] = n;
            cfg["seed"] = seed;
            cfg["prime_bound"] = prime_bound;
            cfg["threads"] = threads;
            SampleSet S = sample_Q(L, m, points, n, seed, prime_bound);
            json out = base_output("sample-q", cfg);
            out["provenance"] = S.provenance;
            out["seed"] = S.seed;
            sample_stats(S, out);
            json am = json::array();
            for (cplx p : points)
                am.push_back(analytic_second_moment(L, m, p.real()));
            out["analytic_second_moment"] = am;
            if (!csv_path.empty()) write_sample_csv(S, csv_path);
            emit_output(out, out_path);
            return 0;
        }

        if (c_sqt->parsed()) {
            LFunction L = make_lfunction(lspec, gdh);
            auto points = parse_complex_list(point_texts, "--points");
            CompactSetContext K =
                CompactSetContext::make(shape.shape(), L.sigma_L());
            double delta_eff = delta > 0 ? delta : K.kwidth + 1.0;
            json cfg;
            cfg["l"] = lspec;
            cfg["gdh"] = gdh;
            cfg["m"] = m;
            json pj = json::array();
            for (cplx p : points) pj.push_back(complex_json(p));
            cfg["points"] = pj;
            cfg["n"] = n;
            cfg["t_base"] = T;
            cfg["scheme"] = scheme;
            cfg["seed"] = seed;
            cfg["delta"] = delta_eff;
            cfg["shape"] = shape.echo();
            cfg["threads"] = threads;
            ef.echo(cfg);
            json out = base_output("sample-qt", cfg);
            ZeroSet Z = resolve_zeros(zeros_path, L, out);
            IntervalSet shifts = admissible_shifts(Z, K, T, delta_eff,
                                                   L.has_pole_at_one());
            SampleSet S = sample_QT(L, m, points, shifts, n,
                                    scheme == "random"
                                        ? SampleScheme::random
                                        : SampleScheme::equispaced,
                                    seed, ef.options());
            out["provenance"] = S.provenance;
            out["seed"] = S.seed;
            out["admissible_measure"] = shifts.total_measure();
            out["excluded_measure"] = T - shifts.total_measure();
            sample_stats(S, out);
            if (!csv_path.empty()) write_sample_csv(S, csv_path);
            emit_output(out, out_path);
            return 0;
        }

        if (c_cmp->parsed()) {
            LFunction L = make_lfunction(lspec, gdh);
            auto points = parse_complex_list(point_texts, "--points");
            CompactSetContext K =
                CompactSetContext::make(shape.shape(), L.sigma_L());
            double delta_eff = delta > 0 ? delta : K.kwidth + 1.0;
            int mr = m_random >= 0 ? m_random : m;
            json cfg;
            cfg["l"] = lspec;
            cfg["gdh"] = gdh;
            cfg["m"] = m;
            cfg["m_random"] = mr;
            json pj = json::array();
            for (cplx p : points) pj.push_back(complex_json(p));
            cfg["points"] = pj;
            cfg["n"] = n;
            cfg["t_base"] = T;
            cfg["seed"] = seed;
            cfg["prime_bound"] = prime_bound;
            cfg["permutations"] = permutations;
            cfg["delta"] = delta_eff;
            cfg["shape"] = shape.echo();
            cfg["threads"] = threads;
            ef.echo(cfg);
            json out = base_output("compare", cfg);
            ZeroSet Z = resolve_zeros(zeros_path, L, out);
            IntervalSet shifts = admissible_shifts(Z, K, T, delta_eff,
                                                   L.has_pole_at_one());
            SampleSet A = sample_QT(L, m, points, shifts, n,
                                    SampleScheme::equispaced, 0,
                                    ef.options());
            SampleSet B = sample_Q(L, mr, points, n, seed, prime_bound);
            out["energy_distance"] = energy_distance(A, B);
            out["rows_shift"] = A.rows.size();
            out["rows_model"] = B.rows.size();
            out["dropped"] = A.dropped;
            out["seed"] = seed;
            if (permutations > 0)
                out["permutation_p_value"] = energy_permutation_pvalue(
                    A, B, permutations, seed + 0x9E37);
            emit_output(out, out_path);
            return 0;
        }

        if (c_poly->parsed()) {
            LFunction L = make_lfunction(lspec, gdh);
            CompactSetContext K =
                CompactSetContext::make(shape.shape(), L.sigma_L());
            double delta_eff = delta > 0 ? delta : K.kwidth + 1.0;
            json cfg;
            cfg["l"] = lspec;
            cfg["gdh"] = gdh;
            cfg["m"] = m;
            cfg["y"] = y;
            cfg["n"] = n;
            cfg["t_base"] = T;
            cfg["delta"] = delta_eff;
            cfg["shape"] = shape.echo();
            cfg["threads"] = threads;
            ef.echo(cfg);
            json out = base_output("poly-check", cfg);
            ZeroSet Z = resolve_zeros(zeros_path, L, out);
            IntervalSet shifts = admissible_shifts(Z, K, T, delta_eff,
                                                   L.has_pole_at_one());
            auto grid = K.grid();
            SampleSet S = sample_QT(L, m, grid, shifts, n,
                                    SampleScheme::equispaced, 0,
                                    ef.options());
            std::ofstream csv;
            if (!csv_path.empty()) {
                csv.open(csv_path, std::ios::binary);
                if (!csv)
                    throw validation_error("--csv: cannot open " + csv_path);
                csv << "shift,sup_error\n";
            }
            double sup = 0.0;
            char buf[64];
            for (std::size_t i = 0; i < S.rows.size(); ++i) {
                double tau = S.shifts[i], worst = 0.0;
                for (std::size_t j = 0; j < grid.size(); ++j)
                    worst = std::max(
                        worst, std::abs(S.rows[i][j] -
                                        dirichlet_poly(L, m,
                                                       grid[j] +
                                                           cplx(0.0, tau),
                                                       y)));
                sup = std::max(sup, worst);
                if (csv.is_open()) {
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", tau,
                                  worst);
                    csv << buf;
                }
            }
            double base = poly_error_envelope(K.sigma0, shape_min_re(K.shape),
                                              y, T, 1.0);
            out["sup_error"] = sup;
            out["envelope_base"] = base;
            out["fitted_c"] = sup / base;
            out["rows"] = S.rows.size();
            out["dropped"] = S.dropped;
            emit_output(out, out_path);
            return 0;
        }

        if (c_smooth->parsed()) {
            LFunction L = make_lfunction(lspec, gdh);
            CompactSetContext K =
                CompactSetContext::make(shape.shape(), L.sigma_L());
            double delta_eff = delta > 0 ? delta : K.kwidth + 1.0;
            json cfg;
            cfg["l"] = lspec;
            cfg["gdh"] = gdh;
            cfg["m"] = m;
            cfg["x_values"] = x_values;
            cfg["n"] = n;
            cfg["t_base"] = T;
            cfg["delta"] = delta_eff;
            cfg["shape"] = shape.echo();
            cfg["threads"] = threads;
            ef.echo(cfg);
            json out = base_output("smooth-check", cfg);
            ZeroSet Z = resolve_zeros(zeros_path, L, out);
            IntervalSet shifts = admissible_shifts(Z, K, T, delta_eff,
                                                   L.has_pole_at_one());
            auto grid = K.grid(5, 8);
            SampleSet S = sample_QT(L, m, grid, shifts, n,
                                    SampleScheme::equispaced, 0,
                                    ef.options());
            json avg = json::array();
            for (double X : x_values) {
                double acc = 0.0;
                for (std::size_t i = 0; i < S.rows.size(); ++i) {
                    double tau = S.shifts[i], worst = 0.0;
                    for (std::size_t j = 0; j < grid.size(); ++j)
                        worst = std::max(
                            worst,
                            std::abs(S.rows[i][j] -
                                     smoothed_sum(L, m,
                                                  grid[j] + cplx(0.0, tau),
                                                  X)));
                    acc += worst;
                }
                avg.push_back(acc / double(S.rows.size()));
            }
            out["avg_sup_error"] = avg;
            out["rows"] = S.rows.size();
            out["dropped"] = S.dropped;
            emit_output(out, out_path);
            return 0;
        }

        if (c_fit->parsed()) {
            LFunction L = make_lfunction(lspec, gdh);
            Polynomial target = parse_poly(target_texts, "--target");
            CompactSetContext K =
                CompactSetContext::make(shape.shape(), L.sigma_L());
            json cfg;
            cfg["l"] = lspec;
            cfg["gdh"] = gdh;
            cfg["m"] = m;
            json tj = json::array();
            for (cplx c : target.coeffs) tj.push_back(complex_json(c));
            cfg["target"] = tj;
            cfg["prime_bound"] = prime_bound;
            cfg["sweeps"] = sweeps;
            cfg["circle_grid"] = circle_grid;
            cfg["shape"] = shape.echo();
            cfg["threads"] = threads;
            PhaseFitResult R =
                phase_fit(L, m, target, K, prime_bound, sweeps, circle_grid);
            json out = base_output("fit-phases", cfg);
            out["achieved_error"] = R.achieved_error;
            out["error_per_sweep"] = R.error_per_sweep;
            out["primes"] = R.assignment.primes.size();
            if (!phases_out.empty()) {
                save_phases(R.assignment, phases_out);
                out["phases_file"] = phases_out;
            }
            emit_output(out, out_path);
            return 0;
        }

        if (c_wit->parsed()) {
            LFunction L = make_lfunction(lspec, gdh);
            Polynomial target = parse_poly(target_texts, "--target");
            CompactSetContext K =
                CompactSetContext::make(shape.shape(), L.sigma_L());
            auto [lo, hi] = parse_range(tau_text, "--tau");
            double delta_eff = delta > 0 ? delta : K.kwidth + 1.0;
            json cfg;
            cfg["l"] = lspec;
            cfg["gdh"] = gdh;
            cfg["m"] = m;
            json tj = json::array();
            for (cplx c : target.coeffs) tj.push_back(complex_json(c));
            cfg["target"] = tj;
            cfg["tau"] = json::array({lo, hi});
            cfg["step"] = step;
            cfg["eps"] = eps;
            cfg["delta"] = delta_eff;
            cfg["y1"] = y1;
            cfg["y2"] = y2;
            cfg["shape"] = shape.echo();
            cfg["threads"] = threads;
            ef.echo(cfg);
            json out = base_output("witness", cfg);
            ZeroSet Z = resolve_zeros(zeros_path, L, out);
            IntervalSet shifts = shifts_on_range(Z, K, lo, hi, delta_eff,
                                                 L.has_pole_at_one());
            WitnessOptions wo;
            wo.y1 = y1;
            wo.y2 = y2;
            wo.eval = ef.options();
            WitnessReport R =
                witness_search(L, m, target, K, shifts, step, eps, wo);
            json hits = json::array();
            for (const WitnessHit& h : R.hits)
                hits.push_back(json::array({h.tau, h.sup_error}));
            out["hits"] = hits;
            out["n_hits"] = R.hits.size();
            out["scanned_measure"] = R.scanned_measure;
            out["density_estimate"] = R.density_estimate;
            out["scanned_steps"] = R.scanned_steps;
            out["stage1_passes"] = R.stage1_passes;
            out["confirm_evals"] = R.confirm_evals;
            out["branch_fallbacks"] = R.branch_fallbacks;
            out["admissible"] = interval_json(shifts);
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path, std::ios::binary);
                if (!csv)
                    throw validation_error("--csv: cannot open " + csv_path);
                csv << "tau,sup_error\n";
                char buf[64];
                for (const WitnessHit& h : R.hits) {
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", h.tau,
                                  h.sup_error);
                    csv << buf;
                }
            }
            emit_output(out, out_path);
            return 0;
        }

        return 0; // unreachable: require_subcommand guarantees a branch
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const validation_error& e) { // parse_error included
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const numeric_error& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected failure: %s\n", e.what());
        return 1;
    }
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(std::size_t(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

} // namespace itlog
