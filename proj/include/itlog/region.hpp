#ifndef ITLOG_REGION_HPP
#define ITLOG_REGION_HPP

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace itlog {

// How a numeric value was obtained; carried alongside every approximate
// result so cross-method agreement is checkable.
enum class Method { series, continuation, collapsed_integral, dirichlet_poly,
                    smoothed };
const char* method_name(Method m);

struct ApproxValue {
    std::complex<double> value{0.0, 0.0};
    double err_bound = 0.0; // absolute
    Method method = Method::series;
};

// Polynomial in s with complex coefficients, coeffs[j] * s^j.
struct Polynomial {
    std::vector<std::complex<double>> coeffs;

    static Polynomial constant(std::complex<double> c) { return {{c}}; }
    std::complex<double> eval(std::complex<double> s) const {
        std::complex<double> v = 0.0;
        for (std::size_t j = coeffs.size(); j-- > 0;) v = v * s + coeffs[j];
        return v;
    }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

struct Rect {
    double re_lo, re_hi, im_lo, im_hi;
    bool contains(std::complex<double> s, double tol = 1e-12) const {
        return s.real() >= re_lo - tol && s.real() <= re_hi + tol &&
               s.imag() >= im_lo - tol && s.imag() <= im_hi + tol;
    }
};

struct Disk {
    std::complex<double> center;
    double radius;
    bool contains(std::complex<double> s, double tol = 1e-12) const {
        return std::abs(s - center) <= radius + tol;
    }
};

using CompactShape = std::variant<Rect, Disk>;

double shape_min_re(const CompactShape& K);
double shape_max_re(const CompactShape& K);
double shape_min_im(const CompactShape& K);
double shape_max_im(const CompactShape& K);
bool shape_contains(const CompactShape& K, std::complex<double> s,
                    double tol = 1e-12);
std::string shape_describe(const CompactShape& K);

// Evaluation grid used whenever a sup over the compact set is discretized:
// an n x n lattice for rectangles (n >= 2, boundary included), and
// boundary_points equally spaced boundary samples plus the center for disks.
std::vector<std::complex<double>> shape_grid(const CompactShape& K,
                                             int rect_n = 7,
                                             int boundary_points = 16);

// The strip geometry attached to a compact target set: the abscissa chain
// sigma_L < sigma0 < sigma1 < min Re K <= max Re K < sigma2 < 1, the center
// height tau0, the height extent kwidth, and the surrounding rectangle R.
struct CompactSetContext {
    CompactShape shape;
    double sigma0, sigma1, sigma2;
    double tau0;
    double kwidth;
    Rect rect_R;

    // Builds the context with the canonical abscissa choices (midpoints of
    // the gaps); throws validation_error when K does not fit in the strip
    // sigma_L < Re K, Re K < 1.
    static CompactSetContext make(const CompactShape& K, double sigma_L);

    std::vector<std::complex<double>> grid(int rect_n = 7,
                                           int boundary_points = 16) const {
        return shape_grid(shape, rect_n, boundary_points);
    }
};

} // namespace itlog

#endif
