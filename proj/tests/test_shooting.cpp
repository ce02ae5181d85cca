#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "twfilm/closed_form.hpp"
#include "twfilm/shooting.hpp"
#include "twfilm/verify.hpp"

using namespace twfilm;

namespace {

const SurfaceTension kSz11 = SurfaceTension::szyszkowski(1.0, 1.0);
const RegimeParams kUnit{1.0, 1.0, 1.0};

std::array<double, 2> rect_field(double, const std::array<double, 2>& y) {
    if (!(y[0] > 0.0 && y[1] > 0.0 && y[1] < 1.0)) {
        return {std::numeric_limits<double>::quiet_NaN(),
                std::numeric_limits<double>::quiet_NaN()};
    }
    auto [dH, dG] = vector_field(kSz11, kUnit, y[0], y[1]);
    return {dH, dG};
}

}  // namespace

TEST_CASE("vector field values") {
    auto [dH, dG] = vector_field(kSz11, kUnit, 1.0, 0.5);
    CHECK(dH == doctest::Approx(1.2).epsilon(1e-14));
    CHECK(dG == doctest::Approx(-0.4).epsilon(1e-14));

    auto geo = select_gamma_bar(kSz11, kUnit);
    auto [dHb, dGb] = vector_field(kSz11, kUnit, geo.H_bar, geo.gamma_bar);
    CHECK(std::abs(dHb) < 1e-10);
    CHECK(dGb < 0.0);

    auto [dHs, dGs] = vector_field(kSz11, kUnit, 2.0 - 1e-6, 1.0 - 1e-6);
    CHECK(std::abs(dHs) + std::abs(dGs) < 1e-3);
}

TEST_CASE("left crossing ordinates") {
    auto geo = select_gamma_bar(kSz11, kUnit);
    double g0s = gamma_0s(kSz11, kUnit, geo, 1e-8);

    auto high = crossing_ordinate_left(kSz11, kUnit, geo, 1.0 - 1e-3);
    REQUIRE(high.has_value());
    CHECK(*high > 0.0);
    CHECK(*high < geo.gamma_bar);

    CHECK_FALSE(crossing_ordinate_left(kSz11, kUnit, geo, geo.gamma_bar * 0.5).has_value());
    CHECK_FALSE(crossing_ordinate_left(kSz11, kUnit, geo, geo.gamma_bar + 1e-6).has_value());

    // ordinates decrease as the start ordinate increases
    double prev = 1.0;
    for (double frac : {0.2, 0.5, 0.8}) {
        double start = g0s + (1.0 - 1e-4 - g0s) * frac;
        auto x = crossing_ordinate_left(kSz11, kUnit, geo, start);
        REQUIRE(x.has_value());
        CHECK(*x < prev);
        prev = *x;
    }
}

TEST_CASE("right crossing ordinates") {
    auto geo = select_gamma_bar(kSz11, kUnit);
    double max_right = 0.0;
    for (double g0 : {0.05, 0.3, geo.gamma_bar, 0.7, 0.97}) {
        double x = crossing_ordinate_right(kSz11, kUnit, geo, g0);
        CHECK(x > 0.0);
        CHECK(x < geo.gamma_bar);
        max_right = std::max(max_right, x);
    }
    double g0s = gamma_0s(kSz11, kUnit, geo, 1e-8);
    for (double frac : {0.1, 0.5, 0.9}) {
        double start = g0s + (1.0 - 1e-4 - g0s) * frac;
        auto xl = crossing_ordinate_left(kSz11, kUnit, geo, start);
        REQUIRE(xl.has_value());
        CHECK(max_right < *xl);
    }
}

TEST_CASE("separating ordinate on the left wall") {
    auto geo = select_gamma_bar(kSz11, kUnit);
    double g0s = gamma_0s(kSz11, kUnit, geo, 1e-8);
    CHECK(g0s > geo.gamma_bar);
    CHECK(g0s < 1.0);

    // the separating trajectory passes near (H_bar, gamma_bar), closer for
    // tighter tolerance
    auto min_distance = [&](double tol) {
        double g = gamma_0s(kSz11, kUnit, geo, tol);
        IntegrateOptions opts;
        opts.max_step = 0.02;
        auto tr = integrate_adaptive<2>(rect_field, {0.0, {1.0, g}}, 50.0, {}, opts);
        // distance from (H_bar, gamma_bar) to the trace polyline
        double best = 1e9;
        for (std::size_t i = 1; i < tr.size(); ++i) {
            double ax = tr.states[i - 1][0] - geo.H_bar;
            double ay = tr.states[i - 1][1] - geo.gamma_bar;
            double bx = tr.states[i][0] - tr.states[i - 1][0];
            double by = tr.states[i][1] - tr.states[i - 1][1];
            double len2 = bx * bx + by * by;
            double t = len2 > 0.0 ? std::clamp(-(ax * bx + ay * by) / len2, 0.0, 1.0) : 0.0;
            best = std::min(best, std::hypot(ax + t * bx, ay + t * by));
        }
        return best;
    };
    double d4 = min_distance(1e-4);
    double d8 = min_distance(1e-8);
    CHECK(d4 < 5.0 * std::sqrt(1e-4));
    CHECK(d8 < 5.0 * std::sqrt(1e-8));
    CHECK(d8 < d4);
}

TEST_CASE("heteroclinic construction") {
    auto out = heteroclinic(kSz11, kUnit);
    const Profile& p = out.profile;

    CHECK(out.bracket_hi - out.bracket_lo <= 1e-12);
    CHECK(out.gamma_star > 0.0);
    CHECK(out.gamma_star < out.geometry.gamma_bar);
    CHECK_FALSE(out.diagnostics.degenerate);

    CHECK(out.diagnostics.backward_end_distance < 1e-3);
    CHECK(out.diagnostics.forward_end_distance < 1e-3);

    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(p.H[i] > 1.0);
        CHECK(p.H[i] < 2.0);
        if (i > 0) CHECK(p.Gamma[i] < p.Gamma[i - 1]);
    }

    // the bracket ordinate sits between sampled right and left crossings
    auto xl = crossing_ordinate_left(kSz11, kUnit, out.geometry, 1.0 - 1e-4);
    REQUIRE(xl.has_value());
    double xr = crossing_ordinate_right(kSz11, kUnit, out.geometry, 0.999);
    CHECK(xr <= out.gamma_star + 1e-10);
    CHECK(out.gamma_star <= *xl + 1e-10);

    // exit sides recorded during the scan and bisection are monotone in gamma
    double top_right = 0.0, bottom_left = 1.0;
    for (const auto& t : out.diagnostics.trial_log) {
        if (t.side == ExitSide::Right) top_right = std::max(top_right, t.gamma);
        if (t.side == ExitSide::Left) bottom_left = std::min(bottom_left, t.gamma);
    }
    CHECK(top_right < bottom_left);

    // residuals and envelope through the verification battery
    auto rep = run_verification(p, kSz11, kUnit);
    CHECK(rep.ode_residual_max < 1e-6);
    CHECK(rep.weak_residual_max < 1e-6);
    CHECK(rep.asymptotics_checked);
    CHECK(rep.asymptotics.envelope_ok);
    CHECK(rep.all_ok);
}

TEST_CASE("compliance and parameter guards") {
    CHECK_THROWS_AS(heteroclinic(SurfaceTension::linear(1.0), kUnit), ComplianceError);
    CHECK_THROWS_AS(heteroclinic(kSz11, RegimeParams{0.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(heteroclinic(kSz11, RegimeParams{1.0, 0.0, 1.0}), DomainError);
}

TEST_CASE("steep transverse rate ratio: wide balls work, tight ones refuse") {
    // G = 0.3, H* = 0.7, a = 0.5 puts the backward transverse rate at about
    // five times the saddle approach rate; the reachable ball in double
    // precision is a few 1e-2 wide.
    auto model = SurfaceTension::szyszkowski(2.0, 0.5);
    RegimeParams prm{0.3, 2.0, 0.7};
    ShootingOptions opts;
    opts.eps_saddle = 0.05;
    auto out = heteroclinic(model, prm, opts);
    CHECK(out.diagnostics.backward_end_distance < 0.05);
    CHECK(out.diagnostics.forward_end_distance < 0.05);
    for (std::size_t i = 1; i < out.profile.size(); ++i) {
        CHECK(out.profile.Gamma[i] < out.profile.Gamma[i - 1]);
    }

    ShootingOptions tight;
    tight.eps_saddle = 1e-3;
    CHECK_THROWS_AS(heteroclinic(model, prm, tight), ConvergenceError);
}

TEST_CASE("Q1 is positively invariant") {
    auto geo = select_gamma_bar(kSz11, kUnit);
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> uh(1.0, geo.H_bar);
    std::uniform_real_distribution<double> ug(1e-4, geo.gamma_bar);
    for (int trial = 0; trial < 1000; ++trial) {
        std::array<double, 2> start{uh(rng), ug(rng)};
        auto tr = integrate_adaptive<2>(rect_field, {0.0, start}, 50.0);
        REQUIRE(tr.termination == Termination::SpanExhausted);
        for (const auto& s : tr.states) {
            CHECK(s[0] >= 1.0 - 1e-9);
            CHECK(s[0] <= geo.H_bar + 1e-9);
            CHECK(s[1] > 0.0);
            CHECK(s[1] <= geo.gamma_bar + 1e-9);
        }
    }
}

TEST_CASE("forward trajectories stay in the rectangle") {
    std::mt19937 rng(321);
    std::uniform_real_distribution<double> uh(1.0 + 1e-6, 2.0 - 1e-6);
    std::uniform_real_distribution<double> ug(1e-3, 1.0 - 1e-3);
    for (int trial = 0; trial < 100; ++trial) {
        std::array<double, 2> start{uh(rng), ug(rng)};
        auto tr = integrate_adaptive<2>(rect_field, {0.0, start}, 50.0);
        REQUIRE(tr.termination == Termination::SpanExhausted);
        for (std::size_t i = 1; i < tr.size(); ++i) {
            CHECK(tr.states[i][0] > 1.0 - 1e-9);
            CHECK(tr.states[i][0] < 2.0 + 1e-9);
            CHECK(tr.states[i][1] > 0.0);
            CHECK(tr.states[i][1] < 1.0);
            CHECK(tr.states[i][1] < tr.states[i - 1][1]);
        }
    }
}

TEST_CASE("resampling the orbit leaves the phase-plane curve unchanged") {
    ShootingOptions coarse;
    auto a = heteroclinic(kSz11, kUnit, coarse);
    ShootingOptions fine = coarse;
    fine.sample_spacing = 0.0025;
    auto b = heteroclinic(kSz11, kUnit, fine);

    // parameterize curve b by Gamma (strictly decreasing) and compare H;
    // the comparison stops short of the saddle tail, where the backward
    // direction amplifies any discretization difference exponentially
    std::vector<double> gb(b.profile.Gamma.rbegin(), b.profile.Gamma.rend());
    std::vector<double> hb(b.profile.H.rbegin(), b.profile.H.rend());
    MonotoneCubic h_of_gamma(gb, hb);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.profile.size(); ++i) {
        double g = a.profile.Gamma[i];
        if (g <= gb.front() || g >= std::min(gb.back(), 0.99)) continue;
        worst = std::max(worst, std::abs(a.profile.H[i] - h_of_gamma.eval(g)));
    }
    CHECK(worst < 1e-8);

    // re-indexing xi by a constant shift moves no phase-plane point
    Profile shifted = a.profile;
    for (double& x : shifted.xi) x += 3.7;
    for (std::size_t i = 0; i < shifted.size(); ++i) {
        CHECK(shifted.H[i] == a.profile.H[i]);
        CHECK(shifted.Gamma[i] == a.profile.Gamma[i]);
    }
}
