#include "anomal/exponents.hpp"

#include <algorithm>
#include <optional>
#include <cmath>
#include <string>

#include "anomal/roots.hpp"

namespace anomal {

namespace {

double tail_c_of(double alpha, double gamma, int dim, const BuildOptions& opts) {
    ProblemParams p{gamma, dim, alpha};
    const PiecewiseProfile prof = build_profile(p, opts);
    const Segment& last = prof.segments.back();
    return last.coeff_a * gamma_fn(0.5 * dim) * reciprocal_gamma(0.5 * (dim - alpha)) *
           std::pow(last.branch_c / 4.0, -0.5 * alpha);
}

// The matching system degenerates on the measure-zero set alpha = N + 2l when
// gamma != 0; a scan grid point landing exactly there is nudged off it.
double tail_c_robust(double alpha, double gamma, int dim, const BuildOptions& opts) {
    try {
        return tail_c_of(alpha, gamma, dim, opts);
    } catch (const numerical_error&) {
        return tail_c_of(alpha + 3e-7, gamma, dim, opts);
    }
}

} // namespace

double tail_coefficient(const ProblemParams& params, const BuildOptions& opts) {
    validate(params);
    return tail_c_of(params.alpha, params.gamma, params.dim, opts);
}

namespace {

ExponentCertificate make_certificate(int k, int dim, double alpha_k,
                                     const PiecewiseProfile& left_profile,
                                     const PiecewiseProfile* left_profile_far, double off,
                                     const ExponentSearchOptions& opts) {
    ExponentCertificate cert;
    cert.breakpoint_count_ok = int(left_profile.breakpoints.size()) == k + 1;
    if (left_profile.breakpoints.empty()) return cert;

    const double b = 0.5 * dim;
    const double a_shift = 0.5 * (dim - alpha_k) - 1.0;
    const double c_last = left_profile.segments.back().branch_c;
    const double eta_last = left_profile.breakpoints.back();

    // Tricomi condition, checked as root coincidence: the zero of
    // h(eta) = U(a_shift, b, (c_last/4) eta^2) nearest the last breakpoint
    // must agree with it. The comparison tolerance carries the measured
    // sensitivity of the last root to alpha (steep inside close exponent
    // pairs), so the check stays meaningful at the localization limit.
    auto h = [&](double eta) { return tricomi_u(a_shift, b, (c_last / 4.0) * eta * eta); };
    double sens = 0.0;
    if (left_profile_far &&
        left_profile_far->breakpoints.size() == left_profile.breakpoints.size())
        sens = std::abs(left_profile_far->breakpoints.back() - eta_last) / (9.0 * off);
    std::optional<double> eta_u;
    double w = 0.02;
    for (; w <= 0.33; w *= 2.0) {
        const double lo = eta_last * (1.0 - w), hi = eta_last * (1.0 + w);
        const double hlo = h(lo), hhi = h(hi);
        if (hlo == 0.0) { eta_u = lo; break; }
        if (hhi == 0.0) { eta_u = hi; break; }
        if (hlo * hhi < 0.0) {
            eta_u = brent_root(h, lo, hi, hlo, hhi, 0.0, 1e-13);
            break;
        }
    }
    if (eta_u) {
        const double tol_eta = opts.cert_tricomi_tol * (*eta_u) + 3.0 * sens * (10.0 * off);
        cert.tricomi_residual = std::abs(eta_last - *eta_u) / *eta_u;
        cert.tricomi_ok = std::abs(eta_last - *eta_u) <= tol_eta;
    } else {
        cert.tricomi_residual = std::numeric_limits<double>::infinity();
        cert.tricomi_ok = false;
    }

    // amplitude-sign condition: the recessive coefficient of the final
    // segment continues the breakpoint sign alternation, sign(B_last) = (-1)^k.
    // B_last = 0 exactly is the gamma=0 degeneracy where the whole Gaussian
    // tail lives inside the truncated M and the condition is vacuous.
    const double b_last = left_profile.segments.back().coeff_b;
    const double parity = (k % 2 == 0) ? 1.0 : -1.0;
    cert.sign_value = ((b_last > 0) - (b_last < 0)) * parity;
    cert.sign_ok = cert.sign_value > 0.0 || b_last == 0.0;
    return cert;
}

/// First root of C on (lo, hi], scanning with `step`. A strict local minimum
/// of |C| without a sign change marks a possible close exponent pair (the
/// coefficient pinches without crossing on this grid); such cells are
/// re-scanned with a 20x finer grid up to `depth` levels.
template <class Fn>
std::optional<double> scan_c_root(Fn&& C, double lo, double hi, double step, int depth,
                                  double bisect_rel_tol) {
    double xm2 = 0.0, xm1 = 0.0, cm2 = 0.0, cm1 = 0.0;
    int have = 0;
    for (double x = lo + step; x < hi + 0.5 * step; x += step) {
        const double cx = C(x);
        if (cx == 0.0) return x;
        if (have >= 1 && cm1 * cx < 0.0)
            return brent_root(C, xm1, x, cm1, cx, 0.0, bisect_rel_tol);
        if (have >= 2 && depth > 0 && std::abs(cm1) < std::abs(cm2) &&
            std::abs(cm1) < std::abs(cx)) {
            auto refined = scan_c_root(C, xm2, x, step / 20.0, depth - 1, bisect_rel_tol);
            if (refined) return refined;
        }
        xm2 = xm1;
        cm2 = cm1;
        xm1 = x;
        cm1 = cx;
        ++have;
    }
    return std::nullopt;
}

ExponentEntry locate_exponent(int k, double gamma, int dim, double lower,
                              const ExponentSearchOptions& opts) {
    auto C = [&](double alpha) { return tail_c_robust(alpha, gamma, dim, opts.build); };
    const double window = opts.window_factor * (k + 2);
    // The coefficient keeps sign (-1)^k on (alpha_{k-1}, alpha_k). Exponents
    // cluster in near pairs for gamma != 0, so the partner of alpha_{k-1} may
    // sit inside the first coarse cell: an off-sign first sample means the
    // crossing is already behind and that cell is re-scanned fine.
    const double ambient = (k % 2 == 0) ? 1.0 : -1.0;
    std::optional<double> found;
    const double c1 = C(lower + opts.scan_step);
    if (c1 == 0.0) {
        found = lower + opts.scan_step;
    } else if (c1 * ambient < 0.0) {
        found = scan_c_root(C, lower, lower + opts.scan_step, opts.scan_step / 20.0,
                            std::max(0, opts.scan_refine_depth - 1), opts.bisect_rel_tol);
        for (double frac : {1e-4, 1e-6, 1e-8, 1e-10}) {
            if (found) break;
            const double x0 = lower + frac * opts.scan_step;
            const double c0 = C(x0);
            if (c0 * ambient > 0.0)
                found = brent_root(C, x0, lower + opts.scan_step, c0, c1, 0.0,
                                   opts.bisect_rel_tol);
        }
    } else {
        found = scan_c_root(C, lower, lower + window, opts.scan_step,
                            opts.scan_refine_depth, opts.bisect_rel_tol);
    }
    if (!found)
        throw numerical_error("find_exponent: no sign change of the tail coefficient in (" +
                              std::to_string(lower) + ", " + std::to_string(lower + window) +
                              ") for k=" + std::to_string(k));
    const double root = *found;

    // certificate data comes from just below the root, where the far
    // breakpoint that enters from infinity above alpha_k is absent
    ExponentEntry entry;
    entry.k = k;
    entry.alpha_k = root;
    entry.gauss_rate = (1.0 + ((k % 2 == 0) ? gamma : -gamma)) / 4.0;
    const double scale_a = std::max(1.0, std::abs(root));
    const double offs[] = {1e-9 * scale_a, 1e-10 * scale_a, 1e-11 * scale_a,
                           1e-12 * scale_a, 1e-8 * scale_a, 1e-7 * scale_a,
                           1e-6 * scale_a, 1e-5 * scale_a};
    for (int attempt = 0; attempt < 8; ++attempt) {
        const double off = offs[attempt];
        const ProblemParams left{gamma, dim, root - off};
        const PiecewiseProfile prof = build_profile(left, opts.build);
        if (int(prof.breakpoints.size()) == k + 1 || attempt == 7) {
            entry.eta_roots = prof.breakpoints;
            std::optional<PiecewiseProfile> far;
            try {
                far = build_profile({gamma, dim, root - 10.0 * off}, opts.build);
            } catch (const numerical_error&) {
                far.reset();
            }
            entry.certificate = make_certificate(k, dim, root, prof,
                                                 far ? &*far : nullptr, off, opts);
            break;
        }
    }
    return entry;
}

} // namespace

ExponentEntry find_exponent(int k, double gamma, int dim, const ExponentSearchOptions& opts) {
    if (k < 0) throw std::invalid_argument("find_exponent: k must be >= 0");
    double lower = std::max(0.0, double(dim - 2));
    ExponentEntry entry;
    for (int j = 0; j <= k; ++j) {
        entry = locate_exponent(j, gamma, dim, lower, opts);
        lower = entry.alpha_k;
    }
    return entry;
}

ExponentTable build_exponent_table(double gamma, int dim, int k_max,
                                   const ExponentSearchOptions& opts) {
    if (!(gamma > -1.0 && gamma < 1.0) || dim < 1 || k_max < 0)
        throw std::invalid_argument("build_exponent_table: invalid arguments");
    ExponentTable table;
    table.gamma = gamma;
    table.dim = dim;
    double lower = std::max(0.0, double(dim - 2));
    for (int k = 0; k <= k_max; ++k) {
        table.entries.push_back(locate_exponent(k, gamma, dim, lower, opts));
        lower = table.entries.back().alpha_k;
    }
    return table;
}

int count_zeros(const ProblemParams& params, const BuildOptions& opts) {
    const PiecewiseProfile prof = build_profile(params, opts);
    int zeros = std::max(0, int(prof.breakpoints.size()) - 1);
    // final-segment guard: the profile keeps one sign past the last root,
    // verified by a dense scan
    const double lo = prof.breakpoints.empty() ? 0.0 : prof.breakpoints.back();
    const double hi = prof.eta_max_scanned;
    const int n = 10000;
    double prev = evaluate(prof, lo + (hi - lo) * (1.0 / n)).f;
    for (int i = 2; i <= n; ++i) {
        const double cur = evaluate(prof, lo + (hi - lo) * (double(i) / n)).f;
        if (prev != 0.0 && cur != 0.0 && prev * cur < 0.0) ++zeros;
        prev = cur;
    }
    return zeros;
}

BehaviorReport classify(const ProblemParams& params, const ExponentTable& table,
                        const BuildOptions& opts) {
    validate(params);
    if (table.entries.empty() || table.entries.back().alpha_k <= params.alpha)
        throw std::invalid_argument("classify: exponent table does not bracket alpha");

    BehaviorReport rep;
    const PiecewiseProfile prof = build_profile(params, opts);
    const AsymptoticDescriptor tail = classify_asymptotics(prof);
    rep.kind = tail.kind;
    rep.tail_constant = tail.coeff;
    rep.rate = tail.rate;
    rep.zero_count = count_zeros(params, opts);

    int k = -1;
    for (const auto& e : table.entries)
        if (e.alpha_k < params.alpha) k = e.k;
    rep.bracket_k = k;
    rep.alpha_lo = (k >= 0) ? table.entries[k].alpha_k : 0.0;
    rep.alpha_hi = table.entries[k + 1].alpha_k;
    rep.zero_count_theorem2 = std::max(0, rep.zero_count - 1);
    return rep;
}

double fitted_power_slope(const PiecewiseProfile& profile) {
    const ProblemParams& p = profile.params;
    const Segment& last = profile.segments.back();
    const double a = 0.5 * p.alpha, b = 0.5 * p.dim;
    const double q = std::abs(a * (a - b + 1.0)) * 4.0 / last.branch_c;
    const double eta_cap = std::sqrt(4.0 * 500.0 / last.branch_c);  // keep |z| <= 500
    const double lo0 = (profile.breakpoints.empty() ? 0.0 : profile.breakpoints.back()) + 2.0;
    double lo = std::max(lo0, std::min(std::sqrt(400.0 * std::max(q, 1.0) / p.alpha),
                                       0.7 * eta_cap));
    double hi = std::min(eta_cap, std::max(2.0 * lo, lo + 4.0));
    if (!(hi > lo * 1.01))
        throw numerical_error("fitted_power_slope: empty fit window");

    const int n = 41;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double eta = lo + (hi - lo) * double(i) / (n - 1);
        const double f = evaluate(profile, eta).f;
        if (f == 0.0) throw numerical_error("fitted_power_slope: zero sample");
        const double x = std::log(eta), y = std::log(std::abs(f));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double fitted_gaussian_rate(const PiecewiseProfile& profile) {
    const ProblemParams& p = profile.params;
    const double rate = profile.segments.back().branch_c / 4.0;
    const double lo = (profile.breakpoints.empty() ? 0.0 : profile.breakpoints.back()) + 2.0;
    const double t_lo = lo * lo;
    const double t_hi = t_lo + 15.0 / rate;   // 15 e-folds of decay
    const int n = 41;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double t = t_lo + (t_hi - t_lo) * double(i) / (n - 1);
        const double eta = std::sqrt(t);
        const double f = evaluate(profile, eta).f;
        if (f == 0.0) throw numerical_error("fitted_gaussian_rate: zero sample");
        const double y = std::log(std::abs(f)) + (p.dim - p.alpha) * std::log(eta);
        sx += t; sy += y; sxx += t * t; sxy += t * y;
    }
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace anomal
