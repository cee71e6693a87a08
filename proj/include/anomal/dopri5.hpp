#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "anomal/errors.hpp"

namespace anomal::detail {

/// One Dormand-Prince 5(4) step on a fixed-size state with the classic
/// quartic dense-output interpolant. FSAL: k[6] of an accepted step is the
/// derivative at the new point.
template <int Dim>
struct Dopri5 {
    using State = std::array<double, Dim>;
    using Rhs = std::function<State(double, const State&)>;

    struct StepResult {
        bool accepted = false;
        double error = 0.0;     // scaled error norm
        State y_new{};
        std::array<State, 7> k{};
    };

    static StepResult step(const Rhs& rhs, double x, const State& y, double h,
                           const State& k1, double atol, double rtol) {
        static constexpr double a21 = 1.0 / 5.0;
        static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
        static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
        static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                                a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
        static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                                a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                                a65 = -5103.0 / 18656.0;
        static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                                b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
        static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                                e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

        StepResult r;
        r.k[0] = k1;
        State t;
        for (int i = 0; i < Dim; ++i) t[i] = y[i] + h * a21 * r.k[0][i];
        r.k[1] = rhs(x + h / 5.0, t);
        for (int i = 0; i < Dim; ++i) t[i] = y[i] + h * (a31 * r.k[0][i] + a32 * r.k[1][i]);
        r.k[2] = rhs(x + 3.0 * h / 10.0, t);
        for (int i = 0; i < Dim; ++i)
            t[i] = y[i] + h * (a41 * r.k[0][i] + a42 * r.k[1][i] + a43 * r.k[2][i]);
        r.k[3] = rhs(x + 4.0 * h / 5.0, t);
        for (int i = 0; i < Dim; ++i)
            t[i] = y[i] + h * (a51 * r.k[0][i] + a52 * r.k[1][i] + a53 * r.k[2][i] + a54 * r.k[3][i]);
        r.k[4] = rhs(x + 8.0 * h / 9.0, t);
        for (int i = 0; i < Dim; ++i)
            t[i] = y[i] + h * (a61 * r.k[0][i] + a62 * r.k[1][i] + a63 * r.k[2][i] +
                               a64 * r.k[3][i] + a65 * r.k[4][i]);
        r.k[5] = rhs(x + h, t);
        for (int i = 0; i < Dim; ++i)
            r.y_new[i] = y[i] + h * (b1 * r.k[0][i] + b3 * r.k[2][i] + b4 * r.k[3][i] +
                                     b5 * r.k[4][i] + b6 * r.k[5][i]);
        r.k[6] = rhs(x + h, r.y_new);

        double err = 0.0;
        for (int i = 0; i < Dim; ++i) {
            const double ei = h * (e1 * r.k[0][i] + e3 * r.k[2][i] + e4 * r.k[3][i] +
                                   e5 * r.k[4][i] + e6 * r.k[5][i] + e7 * r.k[6][i]);
            const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(r.y_new[i]));
            err += (ei / sc) * (ei / sc);
        }
        r.error = std::sqrt(err / Dim);
        r.accepted = r.error <= 1.0;
        return r;
    }

    /// Dense-output coefficients for one accepted step. x_end marks where the
    /// piece stops being valid (an event may truncate it below x0+h).
    struct Interpolant {
        double x0 = 0.0, h = 0.0, x_end = 0.0;
        std::array<double, Dim> r1{}, r2{}, r3{}, r4{}, r5{};

        State eval(double x) const {
            const double th = (x - x0) / h;
            const double th1 = 1.0 - th;
            State out;
            for (int i = 0; i < Dim; ++i)
                out[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
            return out;
        }

        /// d/dx of the interpolant.
        State eval_derivative(double x) const {
            const double th = (x - x0) / h;
            const double th1 = 1.0 - th;
            State out;
            for (int i = 0; i < Dim; ++i) {
                const double inner = r4[i] + th1 * r5[i];
                const double p = r2[i] + th1 * (r3[i] + th * inner);
                const double dp = -(r3[i] + th * inner) + th1 * (inner - th * r5[i]);
                out[i] = (p + th * dp) / h;
            }
            return out;
        }
    };

    static Interpolant make_interpolant(double x, double h, const State& y,
                                        const StepResult& s) {
        static constexpr double d1 = -12715105075.0 / 11282082432.0;
        static constexpr double d3 = 87487479700.0 / 32700410799.0;
        static constexpr double d4 = -10690763975.0 / 1880347072.0;
        static constexpr double d5 = 701980252875.0 / 199316789632.0;
        static constexpr double d6 = -1453857185.0 / 822651844.0;
        static constexpr double d7 = 69997945.0 / 29380423.0;
        Interpolant it;
        it.x0 = x;
        it.h = h;
        it.x_end = x + h;
        for (int i = 0; i < Dim; ++i) {
            const double ydiff = s.y_new[i] - y[i];
            const double bspl = h * s.k[0][i] - ydiff;
            it.r1[i] = y[i];
            it.r2[i] = ydiff;
            it.r3[i] = bspl;
            it.r4[i] = ydiff - h * s.k[6][i] - bspl;
            it.r5[i] = h * (d1 * s.k[0][i] + d3 * s.k[2][i] + d4 * s.k[3][i] +
                            d5 * s.k[4][i] + d6 * s.k[5][i] + d7 * s.k[6][i]);
        }
        return it;
    }

    static double next_step(double h, double err) {
        const double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        return h * std::min(5.0, std::max(0.2, fac));
    }
};

} // namespace anomal::detail
