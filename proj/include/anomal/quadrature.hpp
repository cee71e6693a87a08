#pragma once

#include <cmath>
#include <limits>

#include "anomal/errors.hpp"

namespace anomal {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error
    int evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 15(7) nodes and weights on [-1,1] (positive half).
inline constexpr double gk15_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double gk15_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double gk15_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void gk15_panel(F&& f, double a, double b, double& kronrod, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = gk15_wk[7] * fc;
    double resg = gk15_wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = h * gk15_nodes[j];
        const double fsum = f(c - x) + f(c + x);
        resk += gk15_wk[j] * fsum;
        if (j % 2 == 1) resg += gk15_wg[j / 2] * fsum;
    }
    kronrod = resk * h;
    err = std::abs((resk - resg) * h);
}

template <class F>
inline void gk15_adapt(F&& f, double a, double b, double tol, int depth,
                       QuadratureResult& acc) {
    double v, e;
    gk15_panel(f, a, b, v, e);
    acc.evaluations += 15;
    if (e <= tol || depth >= 48) {
        acc.value += v;
        acc.error += e;
        return;
    }
    const double m = 0.5 * (a + b);
    gk15_adapt(f, a, m, 0.5 * tol, depth + 1, acc);
    gk15_adapt(f, m, b, 0.5 * tol, depth + 1, acc);
}

} // namespace detail

/// Adaptive Gauss-Kronrod 15(7) on a finite interval.
template <class F>
QuadratureResult integrate(F&& f, double a, double b,
                           double abs_tol = 1e-14, double rel_tol = 5e-14) {
    // first pass to set the scale of the relative tolerance
    double v0, e0;
    detail::gk15_panel(f, a, b, v0, e0);
    const double tol = std::max(abs_tol, rel_tol * std::abs(v0));
    QuadratureResult acc;
    detail::gk15_adapt(f, a, b, tol, 0, acc);
    acc.evaluations += 15;
    if (!std::isfinite(acc.value))
        throw numerical_error("integrate: non-finite quadrature result");
    return acc;
}

} // namespace anomal
