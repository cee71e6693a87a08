#include <doctest.h>

#include <cmath>

#include "anomal/oracle.hpp"
#include "anomal/profile.hpp"

using namespace anomal;

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate(ProblemParams{1.0, 1, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ProblemParams{-1.5, 1, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ProblemParams{0.0, 0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ProblemParams{0.0, 1, -2.0}), std::invalid_argument);
    CHECK_NOTHROW(validate(ProblemParams{0.9, 3, 0.1}));
}

TEST_CASE("first_root existence boundary") {
    // no root at alpha <= N-2
    CHECK_FALSE(first_root({0.3, 3, 0.9}).has_value());
    CHECK_FALSE(first_root({0.0, 3, 1.0}).has_value());
    CHECK(first_root({0.3, 3, 1.05}).has_value());
}

TEST_CASE("first_root closed form at alpha = N") {
    // M(-1, b; x) = 1 - x/b vanishes at x = b, i.e. eta_1 = sqrt(2N/(1-gamma))
    for (double g : {-0.6, -0.2, 0.0, 0.4, 0.7})
        for (int N : {1, 2, 3, 5}) {
            const auto r = first_root({g, N, double(N)});
            REQUIRE(r.has_value());
            CHECK(*r == doctest::Approx(std::sqrt(2.0 * N / (1.0 - g))).epsilon(1e-11));
        }
    const auto r = first_root({0.0, 1, 1.0});
    CHECK(*r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("single-segment profile below N-2 stays positive") {
    const ProblemParams p{0.4, 3, 0.5};
    const PiecewiseProfile prof = build_profile(p);
    CHECK(prof.segments.size() == 1);
    CHECK(prof.breakpoints.empty());
    for (int j = 0; j <= 100; ++j) {
        const double eta = 10.0 * j / 100.0;
        CHECK(evaluate(prof, eta).f ==
              doctest::Approx(kummer_m(0.25, 1.5, -0.15 * eta * eta)).epsilon(1e-12));
        CHECK(evaluate(prof, eta).f > 0.0);
    }
}

TEST_CASE("gamma=0 heat profile merges to a Gaussian across the breakpoint") {
    const ProblemParams p{0.0, 1, 1.0};
    const PiecewiseProfile prof = build_profile(p);
    REQUIRE(prof.breakpoints.size() == 1);
    CHECK(prof.breakpoints[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
    CHECK(prof.segments.size() == 2);
    for (int j = 0; j <= 120; ++j) {
        const double eta = 6.0 * j / 120.0;
        CHECK(std::abs(evaluate(prof, eta).f - std::exp(-0.25 * eta * eta)) <= 1e-10);
    }
}

TEST_CASE("gamma=0 alpha=3 breakpoints follow the Hermite-type closed form") {
    // f = e^{-eta^2/4} (1 - eta^2/2); roots of F at eta^2 = 2(3 -+ sqrt(6))
    const ProblemParams p{0.0, 1, 3.0};
    const PiecewiseProfile prof = build_profile(p);
    REQUIRE(prof.breakpoints.size() == 2);
    CHECK(prof.breakpoints[0] ==
          doctest::Approx(std::sqrt(2.0 * (3.0 - std::sqrt(6.0)))).epsilon(1e-11));
    CHECK(prof.breakpoints[1] ==
          doctest::Approx(std::sqrt(2.0 * (3.0 + std::sqrt(6.0)))).epsilon(1e-11));
    for (int j = 0; j <= 120; ++j) {
        const double eta = 7.0 * j / 120.0;
        const double want = std::exp(-0.25 * eta * eta) * (1.0 - 0.5 * eta * eta);
        CHECK(std::abs(evaluate(prof, eta).f - want) <= 1e-10);
    }
    // f vanishes exactly at sqrt(2), strictly inside (eta_1, eta_2)
    CHECK(std::abs(evaluate(prof, std::sqrt(2.0)).f) <= 1e-12);
}

TEST_CASE("evaluate at the origin and the heat point") {
    const PiecewiseProfile prof = build_profile({0.0, 1, 1.0});
    CHECK(evaluate(prof, 0.0).f == 1.0);
    CHECK(evaluate(prof, 0.0).f_prime == 0.0);
    const ProfileEval e = evaluate(prof, 2.0);
    CHECK(e.f == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(e.f_prime == doctest::Approx(-std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("breakpoint evaluation uses the right-hand segment") {
    const ProblemParams p{0.5, 1, 2.0};
    const PiecewiseProfile prof = build_profile(p);
    REQUIRE(prof.breakpoints.size() >= 1);
    const double eta1 = prof.breakpoints[0];
    const Segment& right = prof.segments[1];
    const double a = 0.5 * p.alpha, b = 0.5 * p.dim;
    const double z = -(right.branch_c / 4.0) * eta1 * eta1;
    const double want = right.coeff_a * kummer_m(a, b, z) + right.coeff_b * v_solution(a, b, z);
    CHECK(evaluate(prof, eta1).f == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("closed form matches the ODE oracle (gamma=0.5, N=1, alpha=2)") {
    const ProblemParams p{0.5, 1, 2.0};
    const PiecewiseProfile prof = build_profile(p);
    const OracleTrajectory traj = integrate_barenblatt(p, 8.0, 1e-11);
    double worst = 0.0;
    for (int j = 0; j <= 200; ++j) {
        const double eta = 1e-4 + (8.0 - 2e-4) * j / 200.0;
        const double fo = traj.value_at(eta);
        const double fc = evaluate(prof, eta).f;
        worst = std::max(worst, std::abs(fc - fo) / std::max(std::abs(fo), 1e-3));
    }
    CHECK(worst <= 1e-6);
    // spot value at eta = 3
    CHECK(evaluate(prof, 3.0).f == doctest::Approx(traj.value_at(3.0)).epsilon(1e-6));
}

TEST_CASE("reduced root equation vanishes at breakpoints") {
    const ProblemParams p{0.5, 1, 2.0};
    const PiecewiseProfile prof = build_profile(p);
    for (size_t i = 0; i < prof.breakpoints.size(); ++i) {
        const Segment& seg = prof.segments[i];   // segment owning the root on its right end
        const double eta = prof.breakpoints[i];
        const double scale = std::abs(seg.coeff_a) + std::abs(seg.coeff_b) + 1.0;
        CHECK(std::abs(reduced_root_equation(p, seg, eta)) <= 1e-8 * scale);
        // the reduced residual is F/2 up to roundoff along the whole segment
        const double mid = 0.5 * (seg.lo + eta);
        if (mid > 0.0) {
            const double F = segment_f_combination(p, seg, mid);
            CHECK(reduced_root_equation(p, seg, mid) == doctest::Approx(0.5 * F).epsilon(1e-9));
        }
    }
}

TEST_CASE("reduced root equation closed-form roots") {
    // alpha = N: first root at sqrt(2N/(1-gamma))
    for (double g : {0.0, 0.4}) {
        const ProblemParams p{g, 2, 2.0};
        const Segment seg1{1, 1.0 - g, 0.0, std::numeric_limits<double>::infinity(), 1.0, 0.0};
        CHECK(std::abs(reduced_root_equation(p, seg1, std::sqrt(4.0 / (1.0 - g)))) <= 1e-10);
    }
    const ProblemParams ph{0.0, 1, 1.0};
    const Segment seg1{1, 1.0, 0.0, std::numeric_limits<double>::infinity(), 1.0, 0.0};
    CHECK(std::abs(reduced_root_equation(ph, seg1, std::sqrt(2.0))) <= 1e-10);
}

TEST_CASE("classification: gamma=0 Gaussian and power-law tails") {
    {
        // alpha = N = 1 goes through the degenerate matching and lands Gaussian
        const PiecewiseProfile prof = build_profile({0.0, 1, 1.0});
        const AsymptoticDescriptor d = classify_asymptotics(prof);
        CHECK(d.kind == TailKind::Gaussian);
        CHECK(d.rate == doctest::Approx(0.25).epsilon(1e-12));
    }
    {
        const PiecewiseProfile prof = build_profile({0.0, 1, 2.0});
        const AsymptoticDescriptor d = classify_asymptotics(prof);
        CHECK(d.kind == TailKind::PowerLaw);
        CHECK(d.rate == doctest::Approx(2.0));
        // Dawson asymptotics: M(1, 1/2; -x^2) ~ -1/(2x^2) gives C = -2 exactly
        CHECK(d.coeff == doctest::Approx(-2.0).epsilon(1e-9));
    }
}

TEST_CASE("degenerate matching at alpha = N + 2l with gamma != 0 is rejected") {
    CHECK_THROWS_AS(build_profile({0.5, 1, 3.0}), numerical_error);
}

TEST_CASE("segment cap error") {
    BuildOptions opts;
    opts.max_segments = 2;
    CHECK_THROWS_AS(build_profile({0.0, 1, 5.0}, opts), numerical_error);
}

TEST_CASE("gamma=0 degeneracy across alpha values") {
    for (double alpha : {0.5, 1.0, 2.0, 3.0, 3.7}) {
        const PiecewiseProfile prof = build_profile({0.0, 1, alpha});
        for (int j = 0; j <= 60; ++j) {
            const double eta = 9.0 * j / 60.0;
            const double want = kummer_m(0.5 * alpha, 0.5, -0.25 * eta * eta);
            CHECK(std::abs(evaluate(prof, eta).f - want) <=
                  1e-9 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("C1 continuity and sign structure on a gamma != 0 profile") {
    const ProblemParams p{-0.5, 3, 2.8};
    const PiecewiseProfile prof = build_profile(p);
    REQUIRE(prof.breakpoints.size() >= 1);
    for (size_t i = 0; i < prof.breakpoints.size(); ++i) {
        const double eta = prof.breakpoints[i];
        const double el = 1e-9 * eta;
        const ProfileEval L = evaluate(prof, eta - el);
        const ProfileEval R = evaluate(prof, eta + el);
        const double scale = std::abs(L.f) + std::abs(L.f_prime) + 1.0;
        CHECK(std::abs(L.f - R.f) <= 4e-9 * scale);
        CHECK(std::abs(L.f_prime - R.f_prime) <= 4e-9 * scale);
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        CHECK(prof.f_at_breakpoints[i] * sign > 0.0);
    }
    for (size_t s = 0; s < prof.segments.size(); ++s) {
        const Segment& seg = prof.segments[s];
        const double hi = std::isinf(seg.hi) ? prof.eta_max_scanned : seg.hi;
        const double mid = 0.5 * (seg.lo + hi);
        const ProfileEval e = evaluate(prof, mid);
        const double F = p.alpha * e.f + mid * e.f_prime;
        CHECK(F * ((seg.index_m % 2 == 1) ? 1.0 : -1.0) > 0.0);
    }
}

TEST_CASE("profile ODE residual by finite differences") {
    const ProblemParams p{0.5, 1, 2.0};
    const PiecewiseProfile prof = build_profile(p);
    const double h = 1e-4;
    for (size_t s = 0; s < prof.segments.size(); ++s) {
        const Segment& seg = prof.segments[s];
        const double hi = std::isinf(seg.hi) ? std::min(prof.eta_max_scanned, seg.lo + 5.0) : seg.hi;
        for (int j = 1; j <= 50; ++j) {
            const double eta = seg.lo + (hi - seg.lo) * j / 51.0;
            if (eta - h <= seg.lo || eta + h >= hi) continue;
            const double d2 = (evaluate(prof, eta + h).f - 2.0 * evaluate(prof, eta).f +
                               evaluate(prof, eta - h).f) / (h * h);
            const double d1 = evaluate(prof, eta).f_prime;
            const double f0 = evaluate(prof, eta).f;
            const double res = d2 + (p.dim - 1) / eta * d1 +
                               0.5 * seg.branch_c * (p.alpha * f0 + eta * d1);
            const double scale = std::abs(d2) + std::abs(0.5 * seg.branch_c *
                                 (p.alpha * f0 + eta * d1)) + 1.0;
            CHECK(std::abs(res) <= 1e-6 * scale);
        }
    }
}
