#include "anomal/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "anomal/roots.hpp"

namespace anomal {

namespace {

using Stepper = detail::Dopri5<2>;
using State = Stepper::State;

struct Integration {
    OracleTrajectory traj;
    double eta = 0.0;
    State y{};

    void record(double e, const State& s) {
        traj.etas.push_back(e);
        traj.f_values.push_back(s[0]);
        traj.f_prime_values.push_back(s[1]);
    }
};

// A signed event: g stays positive on the current branch and crosses to
// negative where the branch switches. fire() flips the owning branch state.
struct SignedEvent {
    std::function<double(double, const State&)> g;
    std::function<void(double)> fire;
    EventKind kind;
};

/// Integrates rhs to eta_max. On each accepted step the events are sampled on
/// the dense output; the earliest positive-to-negative crossing is located
/// with Brent, the state is restarted there and the event recorded.
template <class RhsF>
void drive(Integration& in, double eta_max, double tol, const OracleOptions& opts,
           RhsF&& rhs, std::vector<SignedEvent>& events) {
    const double atol = tol, rtol = tol;
    double h = std::min(opts.max_step, 1e-3);
    State k1 = rhs(in.eta, in.y);
    long steps = 0;
    while (in.eta < eta_max) {
        h = std::min(h, opts.max_step);
        if (in.eta + h > eta_max) h = eta_max - in.eta;
        const auto res = Stepper::step(rhs, in.eta, in.y, h, k1, atol, rtol);
        if (++steps > opts.max_steps)
            throw numerical_error("oracle: step cap reached at eta=" + std::to_string(in.eta));
        if (!res.accepted) {
            h = Stepper::next_step(h, res.error);
            if (h < 1e-14 * std::max(1.0, in.eta))
                throw numerical_error("oracle: step underflow near eta=" +
                                      std::to_string(in.eta));
            continue;
        }
        auto interp = Stepper::make_interpolant(in.eta, h, in.y, res);

        // earliest crossing among all events, sampled at quarter points
        double best_x = std::numeric_limits<double>::infinity();
        int best_idx = -1;
        for (size_t ie = 0; ie < events.size(); ++ie) {
            double px = in.eta;
            double pg = events[ie].g(px, in.y);
            for (int s = 1; s <= 4; ++s) {
                const double x = in.eta + h * 0.25 * s;
                const State ys = (s == 4) ? res.y_new : interp.eval(x);
                const double g = events[ie].g(x, ys);
                if (pg > 0.0 && g <= 0.0) {
                    auto g_of = [&](double xx) { return events[ie].g(xx, interp.eval(xx)); };
                    double xe;
                    if (g == 0.0)
                        xe = x;
                    else
                        xe = brent_root(g_of, px, x, pg, g, opts.event_tol, 0.0);
                    if (xe < best_x) {
                        best_x = xe;
                        best_idx = int(ie);
                    }
                    break;
                }
                px = x;
                pg = g;
            }
        }

        if (best_idx >= 0) {
            const State ye = interp.eval(best_x);
            interp.x_end = best_x;
            in.traj.pieces.push_back(interp);
            in.eta = best_x;
            in.y = ye;
            in.record(best_x, ye);
            in.traj.events.push_back({best_x, events[best_idx].kind});
            events[best_idx].fire(best_x);
            k1 = rhs(in.eta, in.y);
            continue;
        }
        in.traj.pieces.push_back(interp);
        in.eta += h;
        in.y = res.y_new;
        in.record(in.eta, in.y);
        k1 = res.k[6];
        h = Stepper::next_step(h, res.error);
    }
}

const Stepper::Interpolant& piece_at(const OracleTrajectory& t, double eta) {
    auto cmp = [](const Stepper::Interpolant& p, double x) { return p.x_end < x; };
    auto it = std::lower_bound(t.pieces.begin(), t.pieces.end(), eta, cmp);
    if (it == t.pieces.end()) --it;
    return *it;
}

} // namespace

double OracleTrajectory::value_at(double eta) const {
    if (pieces.empty()) throw numerical_error("OracleTrajectory: empty trajectory");
    return piece_at(*this, eta).eval(eta)[0];
}

double OracleTrajectory::deriv_at(double eta) const {
    if (pieces.empty()) throw numerical_error("OracleTrajectory: empty trajectory");
    return piece_at(*this, eta).eval(eta)[1];
}

double barenblatt_fpp0(const ProblemParams& params) {
    return -(1.0 - params.gamma) * params.alpha / (2.0 * params.dim);
}

OracleTrajectory integrate_barenblatt(const ProblemParams& params, double eta_max, double tol,
                                      const OracleOptions& opts) {
    validate(params);
    if (!(tol >= 1e-12))
        throw std::invalid_argument("integrate_barenblatt: tol must be >= 1e-12");

    const double alpha = params.alpha;
    const double N = params.dim;
    Integration in;
    const double fpp0 = barenblatt_fpp0(params);
    in.eta = opts.eta0;
    in.y = {1.0 + 0.5 * fpp0 * opts.eta0 * opts.eta0, fpp0 * opts.eta0};
    in.record(in.eta, in.y);

    int sign_F = 1;   // F = alpha f + eta f' > 0 near the origin
    auto rhs = [&](double eta, const State& y) -> State {
        const double c = (sign_F > 0) ? (1.0 - params.gamma) : (1.0 + params.gamma);
        const double w = alpha * y[0] + eta * y[1];
        return {y[1], -(N - 1.0) / eta * y[1] - 0.5 * c * w};
    };
    std::vector<SignedEvent> events;
    events.push_back({[&](double eta, const State& y) {
                          return double(sign_F) * (alpha * y[0] + eta * y[1]);
                      },
                      [&](double) { sign_F = -sign_F; }, EventKind::switch_F});
    drive(in, eta_max, tol, opts, rhs, events);
    return std::move(in.traj);
}

// Branch resolution for sigma(f'') f'' = R: test both hypotheses
// (f'' > 0 with Lambda, f'' < 0 with lambda) and accept the self-consistent
// one; with lambda, Lambda > 0 at most one is, so `ambiguous` flags only the
// exact boundary R = 0 where either branch continues the solution.
std::pair<double, bool> pucci_resolve_fpp(double R, double lambda, double Lambda) {
    const bool plus_ok = (R / Lambda) > 0.0;
    const bool minus_ok = (R / lambda) < 0.0;
    if (plus_ok && !minus_ok) return {R / Lambda, false};
    if (minus_ok && !plus_ok) return {R / lambda, false};
    return {0.0, true};
}

OracleTrajectory integrate_pucci(const ProblemParams& params, double lambda, double Lambda,
                                 double eta_max, double tol, const OracleOptions& opts) {
    if (!(lambda > 0.0 && lambda <= Lambda))
        throw std::invalid_argument("integrate_pucci: requires 0 < lambda <= Lambda");
    if (params.dim < 1 || !(params.alpha > 0.0))
        throw std::invalid_argument("integrate_pucci: invalid dim/alpha");
    if (!(tol >= 1e-12))
        throw std::invalid_argument("integrate_pucci: tol must be >= 1e-12");

    const double alpha = params.alpha;
    const double N = params.dim;
    Integration in;

    int sign_fp = -1;    // f' ~ f''(0) eta < 0 just off the origin
    int sign_fpp = -1;
    const double fpp0 = -alpha / (2.0 * N * lambda);
    in.eta = opts.eta0;
    in.y = {1.0 + 0.5 * fpp0 * opts.eta0 * opts.eta0, fpp0 * opts.eta0};
    in.record(in.eta, in.y);

    auto sigma_of = [&](int s) { return s > 0 ? Lambda : lambda; };
    auto residual_R = [&](double eta, const State& y) {
        return -0.5 * (alpha * y[0] + eta * y[1]) - sigma_of(sign_fp) * (N - 1.0) / eta * y[1];
    };
    auto rhs = [&](double eta, const State& y) -> State {
        return {y[1], residual_R(eta, y) / sigma_of(sign_fpp)};
    };
    {
        auto [fpp_init, ambiguous] = pucci_resolve_fpp(residual_R(in.eta, in.y), lambda, Lambda);
        if (ambiguous)
            in.traj.warnings.push_back("ambiguous f'' branch at eta=" + std::to_string(in.eta));
        else
            sign_fpp = fpp_init > 0.0 ? 1 : -1;
    }
    std::vector<SignedEvent> events;
    events.push_back({[&](double eta, const State& y) {
                          (void)eta;
                          return double(sign_fp) * y[1];
                      },
                      [&](double) { sign_fp = -sign_fp; }, EventKind::switch_fp});
    events.push_back({[&](double eta, const State& y) {
                          return double(sign_fpp) * residual_R(eta, y);
                      },
                      [&](double) { sign_fpp = -sign_fpp; }, EventKind::switch_fpp});
    drive(in, eta_max, tol, opts, rhs, events);
    return std::move(in.traj);
}

} // namespace anomal
