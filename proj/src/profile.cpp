#include "anomal/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "anomal/roots.hpp"

namespace anomal {

namespace {

double branch_constant(int m, double gamma) {
    return 1.0 + ((m % 2 == 0) ? gamma : -gamma);
}

ProfileEval eval_segment(const ProblemParams& params, const Segment& seg, double eta) {
    const double a = 0.5 * params.alpha;
    const double b = 0.5 * params.dim;
    if (eta == 0.0) return {seg.coeff_a, 0.0};
    const double z = -(seg.branch_c / 4.0) * eta * eta;
    const double dz = -(seg.branch_c / 2.0) * eta;
    const auto [m, md] = detail::kummer_m_with_deriv(a, b, z);
    double f = seg.coeff_a * m;
    double fp = seg.coeff_a * md;
    if (seg.coeff_b != 0.0) {
        const auto [v, vd] = detail::v_with_deriv(a, b, z);
        f += seg.coeff_b * v;
        fp += seg.coeff_b * vd;
    }
    return {f, fp * dz};
}

} // namespace

void validate(const ProblemParams& params) {
    if (!(params.gamma > -1.0 && params.gamma < 1.0))
        throw std::invalid_argument("ProblemParams: gamma must lie in (-1, 1)");
    if (params.dim < 1)
        throw std::invalid_argument("ProblemParams: dim must be >= 1");
    if (!(params.alpha > 0.0))
        throw std::invalid_argument("ProblemParams: alpha must be > 0");
}

double default_eta_max(double gamma) {
    return 24.0 / std::sqrt(std::min(1.0 - gamma, 1.0 + gamma));
}

double segment_f_combination(const ProblemParams& params, const Segment& seg, double eta) {
    const ProfileEval e = eval_segment(params, seg, eta);
    return params.alpha * e.f + eta * e.f_prime;
}

double reduced_root_equation(const ProblemParams& params, const Segment& seg, double eta) {
    const double a = 0.5 * params.alpha;
    const double b = 0.5 * params.dim;
    const double z = -(seg.branch_c / 4.0) * eta * eta;
    double r = seg.coeff_a * a * kummer_m(a + 1.0, b, z);
    if (seg.coeff_b != 0.0) r -= seg.coeff_b * v_solution(a + 1.0, b, z);
    return r;
}

std::optional<double> first_root(const ProblemParams& params, const BuildOptions& opts) {
    validate(params);
    if (params.alpha <= params.dim - 2) return std::nullopt;
    const double c1 = 1.0 - params.gamma;
    const double a = 0.5 * (params.dim - params.alpha) - 1.0;
    const double b = 0.5 * params.dim;
    const double eta_max = opts.eta_max > 0.0 ? opts.eta_max : default_eta_max(params.gamma);
    const double step = opts.scan_step_factor * std::sqrt(4.0 / c1);
    auto g = [&](double eta) { return kummer_m(a, b, (c1 / 4.0) * eta * eta); };
    return scan_first_root(g, step * 0.1, eta_max, step, 0.0, opts.root_rel_tol);
}

PiecewiseProfile build_profile(const ProblemParams& params, const BuildOptions& opts) {
    validate(params);
    const double a = 0.5 * params.alpha;
    const double b = 0.5 * params.dim;
    const double eta_max = opts.eta_max > 0.0 ? opts.eta_max : default_eta_max(params.gamma);

    PiecewiseProfile out;
    out.params = params;
    out.eta_max_scanned = eta_max;
    out.tol_gauss = opts.tol_gauss;
    out.segments.push_back({1, branch_constant(1, params.gamma), 0.0,
                            std::numeric_limits<double>::infinity(), 1.0, 0.0});

    while (true) {
        Segment& seg = out.segments.back();
        const double step = opts.scan_step_factor * std::sqrt(4.0 / seg.branch_c);
        auto F = [&](double eta) { return segment_f_combination(params, seg, eta); };
        // start a little inside the segment so the residual of the previous
        // breakpoint root does not re-trigger
        const double start = (seg.index_m == 1) ? 0.0 : seg.lo + 0.1 * step;
        const auto root = scan_first_root(F, start, eta_max, step, 0.0, opts.root_rel_tol);
        if (!root) break;
        const double eta_m = *root;
        if (int(out.segments.size()) + 1 > opts.max_segments)
            throw numerical_error("build_profile: segment cap exceeded");

        const ProfileEval match = eval_segment(params, seg, eta_m);
        seg.hi = eta_m;
        out.breakpoints.push_back(eta_m);
        out.f_at_breakpoints.push_back(match.f);

        const int m2 = seg.index_m + 1;
        const double c2 = branch_constant(m2, params.gamma);
        const double z2 = -(c2 / 4.0) * eta_m * eta_m;
        const double dz2 = -(c2 / 2.0) * eta_m;
        const BasisPair bp = real_basis(a, b, z2);
        const double mb = bp.value_m, vb = bp.value_v;
        const double md = bp.deriv_m * dz2, vd = bp.deriv_v * dz2;

        double A, B;
        const double det = mb * vd - md * vb;
        const double det_scale = std::abs(mb * vd) + std::abs(md * vb);
        if (std::abs(det) > opts.wronskian_rel_floor * det_scale) {
            A = (match.f * vd - match.f_prime * vb) / det;
            B = (mb * match.f_prime - md * match.f) / det;
        } else {
            // degenerate basis: 1/Gamma(b-a) ~ 0 makes V proportional to M.
            // The continuation exists iff the incoming data lies in span{M};
            // project onto the M column and verify below.
            const double den = mb * mb + md * md;
            if (den == 0.0)
                throw numerical_error("build_profile: vanishing basis at eta=" +
                                      std::to_string(eta_m));
            A = (match.f * mb + match.f_prime * md) / den;
            B = 0.0;
        }
        const double scale = std::abs(match.f) + eta_m * std::abs(match.f_prime) +
                             std::abs(A * mb) + std::abs(B * vb);
        const double res = std::abs(A * mb + B * vb - match.f) +
                           std::abs(A * md + B * vd - match.f_prime) * eta_m;
        if (!(res <= opts.match_residual_tol * scale) || !std::isfinite(A) || !std::isfinite(B))
            throw numerical_error("build_profile: ill-conditioned matching system at eta=" +
                                  std::to_string(eta_m) + " (alpha=" +
                                  std::to_string(params.alpha) + ")");
        out.segments.push_back({m2, c2, eta_m, std::numeric_limits<double>::infinity(), A, B});
    }
    return out;
}

ProfileEval evaluate(const PiecewiseProfile& profile, double eta) {
    if (eta < 0.0) throw std::domain_error("evaluate: eta must be >= 0");
    // breakpoint ties resolve to the right-hand segment
    const auto it = std::upper_bound(profile.breakpoints.begin(), profile.breakpoints.end(), eta);
    const size_t idx = size_t(it - profile.breakpoints.begin());
    return eval_segment(profile.params, profile.segments[idx], eta);
}

AsymptoticDescriptor classify_asymptotics(const PiecewiseProfile& profile) {
    const ProblemParams& p = profile.params;
    const Segment& last = profile.segments.back();
    const double b = 0.5 * p.dim;
    const double c4 = last.branch_c / 4.0;
    const double C = last.coeff_a * gamma_fn(b) * reciprocal_gamma(0.5 * (p.dim - p.alpha)) *
                     std::pow(c4, -0.5 * p.alpha);
    const double gauss_scale = std::abs(last.coeff_b) * std::pow(c4, 0.5 * (p.alpha - p.dim));
    AsymptoticDescriptor out;
    if (std::abs(C) <= profile.tol_gauss * gauss_scale) {
        out.kind = TailKind::Gaussian;
        out.coeff = last.coeff_b * std::pow(c4, 0.5 * (p.alpha - p.dim));
        out.rate = c4;
    } else {
        out.kind = TailKind::PowerLaw;
        out.coeff = C;
        out.rate = p.alpha;
    }
    return out;
}

} // namespace anomal
