#pragma once

#include <utility>

#include "anomal/errors.hpp"

namespace anomal {

/// Parameter/argument triple of the Kummer equation z u'' + (b - z) u' - a u = 0.
struct HypParams {
    double a = 0.0;
    double b = 0.0;
    double z = 0.0;
};

/// Values and z-derivatives of the two real basis solutions {M, V} at one point.
/// V(a,b;z) := e^z U(b-a, b; -z) for z < 0; it is recessive as z -> -infinity,
/// V ~ e^z (-z)^(a-b), and independent of M wherever 1/Gamma(b-a) != 0.
struct BasisPair {
    double value_m = 0.0;
    double deriv_m = 0.0;
    double value_v = 0.0;
    double deriv_v = 0.0;
};

/// Gamma function on the real line. Throws std::domain_error at the poles
/// x = 0, -1, -2, ...
double gamma_fn(double x);

/// Entire reciprocal 1/Gamma(x); exactly 0 at the non-positive integers.
double reciprocal_gamma(double x);

/// sin(pi*x) with exact argument reduction; exactly 0 at integers.
double sin_pi(double x);

/// Kummer function M(a,b;z). For z < 0 the evaluation is routed through the
/// transformation M(a,b;z) = e^z M(b-a,b;-z) so the series has no alternating
/// cancellation. b at a non-positive integer is a parameter pole.
double kummer_m(const HypParams& p);
inline double kummer_m(double a, double b, double z) { return kummer_m({a, b, z}); }

/// dM/dz = (a/b) M(a+1, b+1; z).
double kummer_m_deriv(const HypParams& p);
inline double kummer_m_deriv(double a, double b, double z) { return kummer_m_deriv({a, b, z}); }

/// Tricomi function U(a,b;z) for z > 0: the solution recessive as z -> +infinity,
/// U ~ z^(-a). Evaluation: finite polynomial for non-positive integer a,
/// Laplace-integral quadrature for a > 0, contiguous downward recurrence otherwise.
double tricomi_u(const HypParams& p);
inline double tricomi_u(double a, double b, double z) { return tricomi_u({a, b, z}); }

/// dU/dz = -a U(a+1, b+1; z), z > 0.
double tricomi_u_deriv(const HypParams& p);
inline double tricomi_u_deriv(double a, double b, double z) { return tricomi_u_deriv({a, b, z}); }

/// Cross-check oracle for U: backward integration of the Kummer ODE from
/// z_far = max(100, 10|a|, 10|b|), seeded with the 2-term asymptotic series
/// z^(-a) (1 - a(1+a-b)/z). Accuracy is limited by the truncated seed.
double tricomi_u_ode_fallback(const HypParams& p);
inline double tricomi_u_ode_fallback(double a, double b, double z) {
    return tricomi_u_ode_fallback({a, b, z});
}

/// Real companion solution V(a,b;z) = e^z U(b-a, b; -z) for z < 0.
double v_solution(const HypParams& p);
inline double v_solution(double a, double b, double z) { return v_solution({a, b, z}); }

/// dV/dz = e^z [ U(b-a,b;-z) + (b-a) U(b-a+1, b+1; -z) ].
double v_solution_deriv(const HypParams& p);
inline double v_solution_deriv(double a, double b, double z) { return v_solution_deriv({a, b, z}); }

/// {M, M', V, V'} at z < 0.
BasisPair real_basis(double a, double b, double z);

/// Analytic Wronskian of the real pair:
/// W{M(a,b;.), V(a,b;.)}(z) = Gamma(b) * (1/Gamma(b-a)) * (-z)^(-b) * e^z, z < 0.
double basis_wronskian(double a, double b, double z);

namespace detail {
/// Raw power series for M without the z<0 transformation (test use).
double kummer_series(double a, double b, double z);
/// Finite polynomial U(-n, b; z).
double tricomi_u_polynomial(int n, double b, double z);
/// Laplace-integral evaluation of U for a > 0, z > 0.
double tricomi_u_laplace(double a, double b, double z);
/// {M, dM/dz} in one series pass (transform-aware).
std::pair<double, double> kummer_m_with_deriv(double a, double b, double z);
/// {V, dV/dz} sharing the common U evaluation.
std::pair<double, double> v_with_deriv(double a, double b, double z);
} // namespace detail

} // namespace anomal
