#pragma once

#include <vector>

#include "anomal/profile.hpp"

namespace anomal {

/// A posteriori verification data for one anomalous exponent: the profile at
/// alpha_k has exactly k+1 breakpoints, the Tricomi condition
/// U((N-alpha)/2 - 1, N/2; (c_last/4) eta_last^2) = 0 holds at the last root,
/// and the recessive amplitude of the final segment continues the breakpoint
/// sign alternation, sign(B_last) * (-1)^k > 0 (vacuous at B_last = 0, the
/// gamma = 0 degeneracy).
struct ExponentCertificate {
    bool breakpoint_count_ok = false;
    bool tricomi_ok = false;
    bool sign_ok = false;
    double tricomi_residual = 0.0;   // |U| / local scale
    double sign_value = 0.0;         // sign(B_last) * (-1)^k
    bool pass() const { return breakpoint_count_ok && tricomi_ok && sign_ok; }
};

struct ExponentEntry {
    int k = 0;
    double alpha_k = 0.0;
    std::vector<double> eta_roots;   // breakpoints of the profile at alpha_k
    double gauss_rate = 0.0;         // (1 + (-1)^k gamma)/4
    ExponentCertificate certificate;
};

struct ExponentTable {
    double gamma = 0.0;
    int dim = 1;
    std::vector<ExponentEntry> entries;
};

struct ExponentSearchOptions {
    double scan_step = 0.1;
    double bisect_rel_tol = 5e-13;
    double window_factor = 4.0;      // scan window width = factor * (k+2)
    int scan_refine_depth = 7;       // levels of step/20 refinement at |C| dips
    double cert_tricomi_tol = 1e-7;
    BuildOptions build;
};

/// Signed power-law tail coefficient C(alpha); continuous in alpha between
/// exponent crossings and zero exactly at the anomalous exponents.
double tail_coefficient(const ProblemParams& params, const BuildOptions& opts = {});

/// Smallest root of C(alpha) = 0 above alpha_{k-1} (recursively computes the
/// earlier exponents). Throws numerical_error on scan exhaustion.
ExponentEntry find_exponent(int k, double gamma, int dim,
                            const ExponentSearchOptions& opts = {});

/// Exponents 0..k_max.
ExponentTable build_exponent_table(double gamma, int dim, int k_max,
                                   const ExponentSearchOptions& opts = {});

/// Number of sign changes of the profile on [0, eta_max], from the breakpoint
/// structure (one zero per interior interval) plus a dense scan of the final
/// segment.
int count_zeros(const ProblemParams& params, const BuildOptions& opts = {});

/// Tail behavior report for one alpha against a computed exponent table.
/// zero_count follows this artifact's convention #{k : alpha_k < alpha};
/// zero_count_theorem2 is the count printed in the source theorem (one less
/// above alpha_0), reported alongside for comparison.
struct BehaviorReport {
    TailKind kind = TailKind::PowerLaw;
    double tail_constant = 0.0;
    double rate = 0.0;
    int zero_count = 0;
    int zero_count_theorem2 = 0;
    int bracket_k = -1;        // largest k with alpha_k < alpha; -1 below alpha_0
    double alpha_lo = 0.0;     // bracketing exponents (alpha_k, alpha_{k+1})
    double alpha_hi = 0.0;
};

/// Throws std::invalid_argument when the table does not bracket alpha.
BehaviorReport classify(const ProblemParams& params, const ExponentTable& table,
                        const BuildOptions& opts = {});

/// Least-squares slope of log|f| vs log eta over a far-field window chosen
/// from the leading asymptotic correction; returns -alpha for power-law tails.
double fitted_power_slope(const PiecewiseProfile& profile);

/// Minus the least-squares slope of log(|f| eta^(N-alpha)) vs eta^2 over a
/// 15-e-fold window past the last breakpoint; returns c_last/4 for Gaussian
/// tails.
double fitted_gaussian_rate(const PiecewiseProfile& profile);

} // namespace anomal
