#pragma once

#include <string>
#include <utility>
#include <vector>

#include "anomal/dopri5.hpp"
#include "anomal/profile.hpp"

namespace anomal {

enum class EventKind { switch_F, switch_fpp, switch_fp };

struct TrajectoryEvent {
    double eta = 0.0;
    EventKind kind = EventKind::switch_F;
};

/// Dense ODE solution of a profile equation with branch-switch events.
/// etas/f_values/f_prime_values are the accepted integration points;
/// value_at/deriv_at interpolate anywhere in [etas.front(), etas.back()]
/// with the integrator's 5th-order dense output.
struct OracleTrajectory {
    std::vector<double> etas;
    std::vector<double> f_values;
    std::vector<double> f_prime_values;
    std::vector<TrajectoryEvent> events;
    std::vector<std::string> warnings;

    double value_at(double eta) const;
    double deriv_at(double eta) const;

    std::vector<detail::Dopri5<2>::Interpolant> pieces;  // one per accepted step
};

struct OracleOptions {
    double eta0 = 1e-4;        // Taylor-seed start
    double max_step = 0.2;
    double event_tol = 1e-10;  // eta localization of branch switches
    long max_steps = 2000000;
};

/// f''(0) of the Barenblatt profile, from the eta -> 0 limit of the ODE.
double barenblatt_fpp0(const ProblemParams& params);

/// Both-hypotheses resolution of sigma(f'') f'' = R for the Pucci equation;
/// second member flags the R = 0 boundary where either branch continues.
std::pair<double, bool> pucci_resolve_fpp(double R, double lambda, double Lambda);

/// Direct integration of f'' + (N-1)/eta f' = -(c/2)(alpha f + eta f') with
/// c switching between 1-gamma and 1+gamma at the sign changes of
/// F = alpha f + eta f'. Local error <= tol; events located on dense output.
OracleTrajectory integrate_barenblatt(const ProblemParams& params, double eta_max, double tol,
                                      const OracleOptions& opts = {});

/// Radial Pucci profile equation sigma(f'') f'' + sigma(f') (N-1)/eta f' =
/// -(1/2)(alpha f + eta f'), sigma(w) = Lambda for w > 0 and lambda for w < 0;
/// events at the sign changes of f'' and f'. params.gamma is ignored.
OracleTrajectory integrate_pucci(const ProblemParams& params, double lambda, double Lambda,
                                 double eta_max, double tol, const OracleOptions& opts = {});

} // namespace anomal
