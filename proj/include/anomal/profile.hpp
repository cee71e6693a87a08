#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "anomal/special_fn.hpp"

namespace anomal {

/// The triple (gamma, N, alpha) defining one profile problem
/// f'' + (N-1)/eta f' = sigma(alpha f + eta f') (alpha f + eta f'),
/// f(0)=1, f'(0)=0, with sigma(w) = -(1 -+ gamma)/2 by the sign of w.
struct ProblemParams {
    double gamma = 0.0;
    int dim = 1;
    double alpha = 1.0;
};

/// Throws std::invalid_argument unless -1 < gamma < 1, dim >= 1, alpha > 0.
void validate(const ProblemParams& params);

/// One matching interval [lo, hi) on which the profile is
/// f_m = A_m M(alpha/2, N/2; z) + B_m V(alpha/2, N/2; z), z = -(c_m/4) eta^2,
/// with branch constant c_m = 1 + (-1)^m gamma.
struct Segment {
    int index_m = 1;
    double branch_c = 0.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double coeff_a = 1.0;
    double coeff_b = 0.0;
};

struct BuildOptions {
    double eta_max = 0.0;             // 0 -> 24/sqrt(min(1-gamma,1+gamma))
    double scan_step_factor = 0.05;   // step = factor * sqrt(4/c_m)
    double root_rel_tol = 1e-12;      // breakpoint bisection tolerance
    int max_segments = 64;
    double wronskian_rel_floor = 1e-10;  // below: degenerate-basis fallback
    double match_residual_tol = 1e-8;    // consistency check on the matching solve
    double tol_gauss = 1e-8;             // Gaussian-tail classification threshold
};

double default_eta_max(double gamma);

struct PiecewiseProfile {
    ProblemParams params;
    std::vector<Segment> segments;
    std::vector<double> breakpoints;        // eta_1 < eta_2 < ...
    std::vector<double> f_at_breakpoints;
    double eta_max_scanned = 0.0;
    double tol_gauss = 1e-8;
};

struct ProfileEval {
    double f = 0.0;
    double f_prime = 0.0;
};

/// Smallest eta_1 > 0 with M((N-alpha)/2 - 1, N/2; (1-gamma) eta^2 / 4) = 0,
/// or nullopt when alpha <= N-2 (no root exists).
std::optional<double> first_root(const ProblemParams& params, const BuildOptions& opts = {});

/// Builds the piecewise profile by C^1 matching across the roots of
/// F(eta) = eta f' + alpha f. Throws numerical_error on an inconsistent
/// degenerate matching system or when the segment cap is exceeded.
PiecewiseProfile build_profile(const ProblemParams& params, const BuildOptions& opts = {});

/// Value and derivative at eta >= 0; a breakpoint belongs to the right segment.
ProfileEval evaluate(const PiecewiseProfile& profile, double eta);

/// F(eta) = eta f' + alpha f evaluated from one segment's representation.
double segment_f_combination(const ProblemParams& params, const Segment& seg, double eta);

/// Analytic reduction of F on a segment:
/// F/2 = A a M(a+1,b;z) - B V(a+1,b;z), a = alpha/2, b = N/2, z = -(c/4) eta^2.
/// Zeros coincide with the zeros of F; cross-check for the breakpoint search.
double reduced_root_equation(const ProblemParams& params, const Segment& seg, double eta);

enum class TailKind { PowerLaw, Gaussian };

/// Classified tail: f ~ coeff * eta^(-alpha) (PowerLaw, rate = alpha) or
/// f ~ coeff * eta^(alpha-N) exp(-rate eta^2) (Gaussian, rate = c_last/4).
struct AsymptoticDescriptor {
    TailKind kind = TailKind::PowerLaw;
    double coeff = 0.0;
    double rate = 0.0;
};

/// Power-law coefficient C = A_last Gamma(N/2) (1/Gamma((N-alpha)/2)) (c/4)^(-alpha/2);
/// Gaussian when |C| <= tol_gauss |B_last| (c/4)^((alpha-N)/2), with
/// D = B_last (c/4)^((alpha-N)/2) and rate c/4.
AsymptoticDescriptor classify_asymptotics(const PiecewiseProfile& profile);

} // namespace anomal
