#pragma once

#include <cmath>
#include <stdexcept>

namespace refund {

/// Bracketed bisection to absolute tolerance `tol` on the argument.
///
/// Every equation this library solves is single-crossing inside its
/// bracket.  Requires f(lo) and f(hi) of opposite sign or zero at an
/// endpoint.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol = 1e-12, int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::isnan(flo) || std::isnan(fhi))
        throw std::runtime_error("bisect: NaN at bracket endpoint");
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::runtime_error("bisect: endpoints do not bracket a root");
    for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Golden-section maximization of a unimodal-enough f on [lo, hi].
/// Used only to refine grid scans; callers never rely on global optimality.
template <typename F>
double golden_max(F&& f, double lo, double hi, double tol = 1e-10) {
    constexpr double inv_phi = 0.61803398874989484;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace refund
