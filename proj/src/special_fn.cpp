#include "anomal/special_fn.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "anomal/dopri5.hpp"
#include "anomal/quadrature.hpp"

namespace anomal {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kSqrt2Pi = 2.506628274631000502415765284811045;

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

// Lanczos approximation, g = 7, 9 coefficients.
double lanczos_gamma_positive(double x) {
    static const double p[9] = {
        0.99999999999980993,  676.5203681218851,    -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,  12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    const double z = x - 1.0;
    double s = p[0];
    for (int i = 1; i < 9; ++i) s += p[i] / (z + i);
    const double t = z + 7.5;
    return kSqrt2Pi * std::pow(t, z + 0.5) * std::exp(-t) * s;
}

} // namespace

double sin_pi(double x) {
    // reduce to |r| <= 1/2 so sin(pi*n) is exactly zero
    const double n = std::round(x);
    const double r = x - n;
    const double s = std::sin(kPi * r);
    return (std::fmod(std::abs(n), 2.0) == 1.0) ? -s : s;
}

double gamma_fn(double x) {
    if (is_nonpositive_integer(x))
        throw std::domain_error("gamma_fn: pole at non-positive integer x=" + std::to_string(x));
    if (x < 0.5) {
        // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x))
        return kPi / (sin_pi(x) * lanczos_gamma_positive(1.0 - x));
    }
    return lanczos_gamma_positive(x);
}

double reciprocal_gamma(double x) {
    if (x >= 0.5) return 1.0 / lanczos_gamma_positive(x);
    // 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi, entire in x
    return sin_pi(x) * lanczos_gamma_positive(1.0 - x) / kPi;
}

namespace detail {

double kummer_series(double a, double b, double z) {
    double term = 1.0;
    double sum = 1.0;
    int small_count = 0;
    for (int k = 0; k < 10000; ++k) {
        term *= (a + k) / (b + k) * z / (k + 1);
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) {
            if (++small_count >= 3) return sum;
        } else {
            small_count = 0;
        }
    }
    throw numerical_error("kummer_series: term cap reached (a=" + std::to_string(a) +
                          ", b=" + std::to_string(b) + ", z=" + std::to_string(z) + ")");
}

// value and z-derivative from one series pass
std::pair<double, double> kummer_series_with_deriv(double a, double b, double z) {
    double term = 1.0;
    double sum = 1.0;
    double dsum = 0.0;   // sum of k * term_k / z
    int small_count = 0;
    for (int k = 0; k < 10000; ++k) {
        term *= (a + k) / (b + k) * z / (k + 1);
        sum += term;
        dsum += term * double(k + 1) / z;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) {
            if (++small_count >= 3) return {sum, dsum};
        } else {
            small_count = 0;
        }
    }
    throw numerical_error("kummer_series_with_deriv: term cap reached");
}

std::pair<double, double> kummer_m_with_deriv(double a, double b, double z) {
    if (z == 0.0) return {1.0, a / b};
    if (z < 0.0) {
        const auto [s, ds] = kummer_series_with_deriv(b - a, b, -z);
        const double e = std::exp(z);
        return {e * s, e * (s - ds)};
    }
    return kummer_series_with_deriv(a, b, z);
}

std::pair<double, double> v_with_deriv(double a, double b, double z) {
    const double ba = b - a;
    const double x = -z;
    const double u1 = tricomi_u({ba, b, x});
    const double u2 = (ba != 0.0) ? ba * tricomi_u({ba + 1.0, b + 1.0, x}) : 0.0;
    const double e = std::exp(z);
    return {e * u1, e * (u1 + u2)};
}

} // namespace detail

double kummer_m(const HypParams& p) {
    if (is_nonpositive_integer(p.b))
        throw std::domain_error("kummer_m: parameter pole, b non-positive integer b=" +
                                std::to_string(p.b));
    double value;
    if (p.z < 0.0)
        value = std::exp(p.z) * detail::kummer_series(p.b - p.a, p.b, -p.z);
    else
        value = detail::kummer_series(p.a, p.b, p.z);
    if (!std::isfinite(value))
        throw numerical_error("kummer_m: non-finite result");
    return value;
}

double kummer_m_deriv(const HypParams& p) {
    if (is_nonpositive_integer(p.b) || is_nonpositive_integer(p.b + 1.0))
        throw std::domain_error("kummer_m_deriv: parameter pole in b or b+1");
    return (p.a / p.b) * kummer_m({p.a + 1.0, p.b + 1.0, p.z});
}

namespace detail {

double tricomi_u_polynomial(int n, double b, double z) {
    // U(-n, b; z) = (-1)^n sum_{k=0}^{n} C(n,k) (b+k)_{n-k} (-z)^k
    double sum = 0.0;
    double binom = 1.0;
    for (int k = 0; k <= n; ++k) {
        double poch = 1.0;
        for (int j = 0; j < n - k; ++j) poch *= b + k + j;
        sum += binom * poch * std::pow(-z, k);
        binom *= double(n - k) / double(k + 1);
    }
    return (n % 2 == 0) ? sum : -sum;
}

double tricomi_u_laplace(double a, double b, double z) {
    // U(a,b;z) = 1/Gamma(a) * Int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt, a > 0
    const double pw = b - a - 1.0;
    double part1;
    if (a >= 1.0) {
        part1 = integrate([&](double t) {
                    return std::exp(-z * t) * std::pow(t, a - 1.0) * std::pow(1.0 + t, pw);
                }, 0.0, 1.0).value;
    } else {
        // u = t^a removes the endpoint singularity
        part1 = integrate([&](double u) {
                    if (u <= 0.0) return 1.0 / a;  // integrand limit: g(0)/a with g(0)=1
                    const double t = std::pow(u, 1.0 / a);
                    return std::exp(-z * t) * std::pow(1.0 + t, pw) / a;
                }, 0.0, 1.0).value;
    }
    // tail over t in [1, inf): t = 1 + w, truncated where the integrand is
    // below 1e-22 of its left-edge magnitude
    const double q = std::max(a - 1.0, 0.0) + std::max(pw, 0.0);
    double w_max = 52.0 / z;
    for (int i = 0; i < 60; ++i) {
        if (z * w_max - q * std::log1p(w_max / 2.0) > 52.0) break;
        w_max *= 2.0;
    }
    const double part2 = integrate([&](double w) {
                             return std::exp(-z * (1.0 + w)) * std::pow(1.0 + w, a - 1.0) *
                                    std::pow(2.0 + w, pw);
                         }, 0.0, w_max).value;
    return reciprocal_gamma(a) * (part1 + part2);
}

} // namespace detail

namespace detail {

// Optimally truncated asymptotic series U ~ z^-a sum_k (a)_k (a-b+1)_k / (k! (-z)^k);
// succeeds when the smallest term is below 1e-13 of the sum.
std::optional<double> tricomi_u_asymptotic(double a, double b, double z) {
    double term = 1.0;
    double sum = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 700; ++k) {
        term *= -(a + k - 1.0) * (a - b + k) / (double(k) * z);
        if (std::abs(term) >= std::abs(prev)) {
            if (std::abs(prev) <= 1e-13 * std::abs(sum)) return std::pow(z, -a) * sum;
            return std::nullopt;   // diverging before convergence
        }
        sum += term;
        if (std::abs(term) <= 1e-16 * std::abs(sum)) return std::pow(z, -a) * sum;
        prev = term;
    }
    return std::nullopt;
}

} // namespace detail

double tricomi_u(const HypParams& p) {
    const double a = p.a, b = p.b, z = p.z;
    if (!(z > 0.0))
        throw std::domain_error("tricomi_u: requires z > 0 (use v_solution for z <= 0), z=" +
                                std::to_string(z));
    if (is_nonpositive_integer(a))
        return detail::tricomi_u_polynomial(int(-a), b, z);
    if (z >= 25.0 && z >= 4.0 * (std::abs(a) + std::abs(a - b) + 1.0)) {
        const auto asym = detail::tricomi_u_asymptotic(a, b, z);
        if (asym) return *asym;
    }
    if (a > 0.0)
        return detail::tricomi_u_laplace(a, b, z);
    // a < 0 non-integer: seed at a+n in (0,1] and recurse downward in a,
    // U(t-1,b;z) = (2t - b + z) U(t,b;z) - t (1 + t - b) U(t+1,b;z)
    const int n = int(std::ceil(-a));
    double u_t = detail::tricomi_u_laplace(a + n, b, z);
    double u_t1 = detail::tricomi_u_laplace(a + n + 1.0, b, z);
    for (int i = 0; i < n; ++i) {
        const double t = a + double(n - i);
        const double u_tm1 = (2.0 * t - b + z) * u_t - t * (1.0 + t - b) * u_t1;
        u_t1 = u_t;
        u_t = u_tm1;
    }
    if (!std::isfinite(u_t))
        throw numerical_error("tricomi_u: non-finite result");
    return u_t;
}

double tricomi_u_deriv(const HypParams& p) {
    if (!(p.z > 0.0))
        throw std::domain_error("tricomi_u_deriv: requires z > 0");
    if (p.a == 0.0) return 0.0;
    return -p.a * tricomi_u({p.a + 1.0, p.b + 1.0, p.z});
}

double tricomi_u_ode_fallback(const HypParams& p) {
    const double a = p.a, b = p.b, z = p.z;
    if (!(z > 0.0))
        throw std::domain_error("tricomi_u_ode_fallback: requires z > 0");
    const double z_far = std::max({100.0, 10.0 * std::abs(a), 10.0 * std::abs(b)});
    const double corr = a * (1.0 + a - b);
    if (z >= z_far)
        return std::pow(z, -a) * (1.0 - corr / z);

    using Stepper = detail::Dopri5<2>;
    Stepper::State y = {std::pow(z_far, -a) * (1.0 - corr / z_far),
                        -a * std::pow(z_far, -a - 1.0) + corr * (a + 1.0) * std::pow(z_far, -a - 2.0)};
    const auto rhs = [a, b](double x, const Stepper::State& s) -> Stepper::State {
        return {s[1], (a * s[0] - (b - x) * s[1]) / x};
    };
    double x = z_far;
    double h = -0.1;
    Stepper::State k1 = rhs(x, y);
    const double atol = 1e-14, rtol = 1e-12;
    int steps = 0;
    while (x > z) {
        if (x + h < z) h = z - x;
        auto res = Stepper::step(rhs, x, y, h, k1, atol, rtol);
        if (res.accepted) {
            x += h;
            y = res.y_new;
            k1 = res.k[6];
        }
        h = Stepper::next_step(h, res.error);
        if (std::abs(h) < 1e-14 * std::abs(x))
            throw numerical_error("tricomi_u_ode_fallback: step underflow");
        if (++steps > 2000000)
            throw numerical_error("tricomi_u_ode_fallback: step cap reached");
    }
    return y[0];
}

double v_solution(const HypParams& p) {
    if (!(p.z < 0.0))
        throw std::domain_error("v_solution: requires z < 0, z=" + std::to_string(p.z));
    return std::exp(p.z) * tricomi_u({p.b - p.a, p.b, -p.z});
}

double v_solution_deriv(const HypParams& p) {
    if (!(p.z < 0.0))
        throw std::domain_error("v_solution_deriv: requires z < 0");
    const double ba = p.b - p.a;
    double second = 0.0;
    if (ba != 0.0) second = ba * tricomi_u({ba + 1.0, p.b + 1.0, -p.z});
    return std::exp(p.z) * (tricomi_u({ba, p.b, -p.z}) + second);
}

BasisPair real_basis(double a, double b, double z) {
    if (is_nonpositive_integer(b))
        throw std::domain_error("real_basis: parameter pole, b non-positive integer");
    if (!(z < 0.0)) throw std::domain_error("real_basis: requires z < 0");
    BasisPair out;
    const auto [m, md] = detail::kummer_m_with_deriv(a, b, z);
    const auto [v, vd] = detail::v_with_deriv(a, b, z);
    out.value_m = m;
    out.deriv_m = md;
    out.value_v = v;
    out.deriv_v = vd;
    return out;
}

double basis_wronskian(double a, double b, double z) {
    if (!(z < 0.0))
        throw std::domain_error("basis_wronskian: requires z < 0");
    return gamma_fn(b) * reciprocal_gamma(b - a) * std::pow(-z, -b) * std::exp(z);
}

} // namespace anomal
