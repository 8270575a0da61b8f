#include "itlog/region.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "itlog/errors.hpp"

namespace itlog {

const char* method_name(Method m) {
    switch (m) {
        case Method::series: return "series";
        case Method::continuation: return "continuation";
        case Method::collapsed_integral: return "collapsed-integral";
        case Method::dirichlet_poly: return "dirichlet-poly";
        case Method::smoothed: return "smoothed";
    }
    return "unknown";
}

double shape_min_re(const CompactShape& K) {
    if (auto* r = std::get_if<Rect>(&K)) return r->re_lo;
    auto& d = std::get<Disk>(K);
    return d.center.real() - d.radius;
}
double shape_max_re(const CompactShape& K) {
    if (auto* r = std::get_if<Rect>(&K)) return r->re_hi;
    auto& d = std::get<Disk>(K);
    return d.center.real() + d.radius;
}
double shape_min_im(const CompactShape& K) {
    if (auto* r = std::get_if<Rect>(&K)) return r->im_lo;
    auto& d = std::get<Disk>(K);
    return d.center.imag() - d.radius;
}
double shape_max_im(const CompactShape& K) {
    if (auto* r = std::get_if<Rect>(&K)) return r->im_hi;
    auto& d = std::get<Disk>(K);
    return d.center.imag() + d.radius;
}

bool shape_contains(const CompactShape& K, std::complex<double> s,
                    double tol) {
    if (auto* r = std::get_if<Rect>(&K)) return r->contains(s, tol);
    return std::get<Disk>(K).contains(s, tol);
}

std::string shape_describe(const CompactShape& K) {
    std::ostringstream os;
    if (auto* r = std::get_if<Rect>(&K)) {
        os << "rect[" << r->re_lo << "," << r->re_hi << "]x[" << r->im_lo
           << "," << r->im_hi << "]";
    } else {
        auto& d = std::get<Disk>(K);
        os << "disk(center=" << d.center.real() << "+" << d.center.imag()
           << "i, r=" << d.radius << ")";
    }
    return os.str();
}

std::vector<std::complex<double>> shape_grid(const CompactShape& K, int rect_n,
                                             int boundary_points) {
    std::vector<std::complex<double>> pts;
    if (auto* r = std::get_if<Rect>(&K)) {
        if (rect_n < 2) throw validation_error("grid size must be >= 2");
        for (int i = 0; i < rect_n; ++i) {
            double x = r->re_lo +
                       (r->re_hi - r->re_lo) * i / double(rect_n - 1);
            for (int j = 0; j < rect_n; ++j) {
                double y = r->im_lo +
                           (r->im_hi - r->im_lo) * j / double(rect_n - 1);
                pts.emplace_back(x, y);
            }
        }
        return pts;
    }
    auto& d = std::get<Disk>(K);
    if (boundary_points < 4)
        throw validation_error("disk grid needs >= 4 boundary points");
    pts.push_back(d.center);
    for (int i = 0; i < boundary_points; ++i) {
        double ang = 2.0 * std::numbers::pi * i / boundary_points;
        pts.push_back(d.center +
                      d.radius * std::complex<double>(std::cos(ang),
                                                      std::sin(ang)));
    }
    return pts;
}

CompactSetContext CompactSetContext::make(const CompactShape& K,
                                          double sigma_L) {
    double lo = shape_min_re(K), hi = shape_max_re(K);
    if (!(sigma_L < lo))
        throw validation_error(
            "compact set must lie strictly right of sigma_L = " +
            std::to_string(sigma_L));
    if (!(hi < 1.0))
        throw validation_error("compact set must lie strictly left of Re = 1");

    CompactSetContext ctx;
    ctx.shape = K;
    // midpoint chain: sigma_L < sigma0 < sigma1 < lo and hi < sigma2 < 1
    ctx.sigma0 = sigma_L + 0.5 * (lo - sigma_L);
    ctx.sigma1 = sigma_L + 0.75 * (lo - sigma_L);
    ctx.sigma2 = hi + 0.5 * (1.0 - hi);
    double im_lo = shape_min_im(K), im_hi = shape_max_im(K);
    ctx.tau0 = 0.5 * (im_lo + im_hi);
    ctx.kwidth = im_hi - im_lo;
    ctx.rect_R = Rect{ctx.sigma1, ctx.sigma2, im_lo - 0.5, im_hi + 0.5};
    return ctx;
}

} // namespace itlog
