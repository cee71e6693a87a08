#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "anomal/errors.hpp"

namespace anomal {

/// Brent's method on a bracketing interval [a,b] with f(a)*f(b) <= 0.
/// Converges to |b-a| <= xtol_abs + xtol_rel*|x|.
template <class F>
double brent_root(F&& f, double a, double b, double fa, double fb,
                  double xtol_abs = 0.0, double xtol_rel = 1e-13,
                  int max_iter = 200) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0)
        throw numerical_error("brent_root: interval does not bracket a root");

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < max_iter; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b)
                         + 0.5 * (xtol_abs + xtol_rel * std::abs(b));
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol || fb == 0.0) return b;

        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            // inverse quadratic interpolation / secant
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : (xm > 0 ? tol : -tol);
        fb = f(b);
        if (fb * fc > 0.0) {
            c = a; fc = fa;
            d = b - a; e = d;
        }
    }
    throw numerical_error("brent_root: iteration cap reached");
}

/// Scans [lo, hi] with step h for the first sign change of f and refines it
/// with Brent. Returns nullopt when no sign change occurs up to hi.
template <class F>
std::optional<double> scan_first_root(F&& f, double lo, double hi, double h,
                                      double xtol_abs = 0.0, double xtol_rel = 1e-12) {
    double x = lo;
    double fx = f(x);
    if (fx == 0.0) return x;
    while (x < hi) {
        double x2 = std::min(x + h, hi);
        double f2 = f(x2);
        if (f2 == 0.0) return x2;
        if (fx * f2 < 0.0)
            return brent_root(f, x, x2, fx, f2, xtol_abs, xtol_rel);
        x = x2;
        fx = f2;
        if (x2 >= hi) break;
    }
    return std::nullopt;
}

} // namespace anomal
