#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "twfilm/closed_form.hpp"
#include "twfilm/verify.hpp"
#include "twfilm/version.hpp"

using namespace twfilm;

namespace {

const SurfaceTension kSz11 = SurfaceTension::szyszkowski(1.0, 1.0);

Profile constant_profile(const RegimeParams& params, double lo, double hi, std::size_t n) {
    Profile p;
    p.meta.model_spec = kSz11.spec_string();
    p.meta.params = params;
    p.meta.anchor = "constant";
    p.meta.tool_version = kToolVersion;
    for (std::size_t i = 0; i < n; ++i) {
        p.xi.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
        p.H.push_back(params.H_star);
        p.Gamma.push_back(0.0);
        p.dH.push_back(0.0);
        p.dGamma.push_back(0.0);
        p.flags.push_back(SampleFlag::Smooth);
    }
    return p;
}

}  // namespace

TEST_CASE("constant solution has zero residuals") {
    RegimeParams params{0.0, 1.0, 1.0};
    auto p = constant_profile(params, -25.0, 25.0, 2001);
    CHECK(ode_residual(p, kSz11, params) == 0.0);
    CHECK(weak_residual(p, kSz11, params, default_bump_battery(p)) < 1e-10);
    auto rep = run_verification(p, kSz11, params);
    CHECK(rep.all_ok);
    CHECK_FALSE(rep.asymptotics.envelope_checked);
}

TEST_CASE("pointwise residual of the exact piecewise solution") {
    RegimeParams params{0.0, 0.0, 0.5};
    auto p = solve_G0_D0(kSz11, params, -10.0, 5.0, 2001);
    CHECK(ode_residual(p, kSz11, params) < 1e-8);
    CHECK_THROWS_AS(ode_residual(solve_G0_D0(kSz11, params, -1.0, 1.0, 3), kSz11, params),
                    DomainError);
}

TEST_CASE("weak residual handles the height jump") {
    RegimeParams params{0.0, 0.0, 0.5};
    auto p = solve_G0_D0(kSz11, params, -15.0, 15.0, 3001);
    // bump straddling the x - t = 0 line
    std::vector<BumpTest> tests{{0.0, 1.5, 0.0, 2.0}};
    CHECK(weak_residual(p, kSz11, params, tests) < 1e-6);

    // quadrature refinement: halving the coarse cell reduces the residual
    // at least fourfold until the interpolation floor
    WeakOptions coarse{2, 0.25};
    WeakOptions half{2, 0.125};
    double rc = weak_residual(p, kSz11, params, tests, coarse);
    double rh = weak_residual(p, kSz11, params, tests, half);
    CHECK(rc >= 4.0 * rh);
}

TEST_CASE("weak residual rejects supports outside the window") {
    RegimeParams params{0.0, 1.0, 1.0};
    auto p = constant_profile(params, -5.0, 5.0, 201);
    std::vector<BumpTest> tests{{0.0, 1.5, 4.0, 2.0}};
    CHECK_THROWS_AS(weak_residual(p, kSz11, params, tests), DomainError);
}

TEST_CASE("asymptotics and the decay envelope") {
    RegimeParams params{0.0, 1.0, 1.0};
    auto p = solve_G0_Dpos(kSz11, params, 0.5, -30.0, 30.0, 6001);
    auto rep = asymptotics_check(p, kSz11, params);
    CHECK(rep.end_left_H < 1e-3);
    CHECK(rep.end_left_Gamma < 1e-3);
    CHECK(rep.end_right_H < 1e-3);
    CHECK(rep.end_right_Gamma < 1e-3);
    CHECK(rep.envelope_checked);
    CHECK(rep.envelope_ok);
    // Gamma(0) = 1/2 and sup|sigma'| = 2 on (0, 1/2) give delta0 = 1/6
    CHECK(rep.delta0 == doctest::Approx(1.0 / 6.0).epsilon(1e-4));

    auto short_profile = solve_G0_Dpos(kSz11, params, 0.5, -5.0, 5.0, 501);
    CHECK_THROWS_AS(asymptotics_check(short_profile, kSz11, params), DomainError);
}

TEST_CASE("regularity classification per regime") {
    SUBCASE("both mechanisms off: value jump in H, slope jump in Gamma") {
        RegimeParams params{0.0, 0.0, 0.5};
        auto p = solve_G0_D0(kSz11, params, -10.0, 5.0, 2001);
        auto rep = regularity_check(p, params);
        REQUIRE(rep.kinks.size() == 1);
        CHECK(rep.kinks[0].H_jump == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(rep.kinks[0].dGamma_jump == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(rep.regime_expectation_met);
    }
    SUBCASE("gravity without diffusion: slope jumps in both components") {
        RegimeParams params{1.0, 0.0, 1.0};
        auto p = solve_Gpos_D0(kSz11, params, -20.0, 40.0, 6001);
        auto rep = regularity_check(p, params);
        REQUIRE(rep.kinks.size() == 1);
        CHECK(std::abs(rep.kinks[0].dH_jump - 0.375) < 0.05 * 0.375);
        CHECK(std::abs(rep.kinks[0].dGamma_jump - 0.5) < 0.05 * 0.5);
        CHECK(rep.regime_expectation_met);
    }
    SUBCASE("diffusion smooths every jump") {
        RegimeParams params{0.0, 1.0, 1.0};
        auto p = solve_G0_Dpos(kSz11, params, 0.5, -30.0, 30.0, 6001);
        auto rep = regularity_check(p, params);
        CHECK(rep.kinks.empty());
        CHECK(rep.max_interior_jump < 1e-4);
        CHECK(rep.regime_expectation_met);
    }
}

TEST_CASE("uncoated side of the piecewise front is exact") {
    RegimeParams params{0.0, 0.0, 0.5};
    auto p = solve_G0_D0(kSz11, params, -25.0, 25.0, 2001);
    auto rep = asymptotics_check(p, kSz11, params);
    CHECK(rep.end_right_H == 0.0);
    CHECK(rep.end_right_Gamma == 0.0);
    CHECK(rep.end_left_H == 0.0);
    CHECK(rep.end_left_Gamma < 1e-10);
}

TEST_CASE("every solver profile passes the full battery") {
    // H* = 1 keeps the coated tail clear of the double-precision wall:
    // sigma' grows like e^{|xi|/(2H*)} there and amplifies the ulp noise of
    // Gamma near 1 in the differenced residual.
    RegimeParams p00{0.0, 0.0, 1.0};
    RegimeParams p01{0.0, 1.0, 1.0};
    RegimeParams p10{1.0, 0.0, 1.0};
    std::vector<std::pair<Profile, RegimeParams>> cases;
    cases.emplace_back(solve_G0_D0(kSz11, p00, -25.0, 25.0, 4001), p00);
    cases.emplace_back(solve_G0_Dpos(kSz11, p01, 0.5, -30.0, 30.0, 6001), p01);
    cases.emplace_back(solve_Gpos_D0(kSz11, p10, -25.0, 40.0, 6001), p10);
    for (const auto& [profile, params] : cases) {
        auto rep = run_verification(profile, kSz11, params);
        CHECK(rep.monotone_ok);
        CHECK(rep.bounds_ok);
        CHECK(rep.all_ok);
    }
}

TEST_CASE("pointwise residual converges under grid refinement") {
    RegimeParams params{0.0, 1.0, 1.0};
    // window away from Gamma -> 1 so truncation dominates roundoff
    auto coarse = solve_G0_Dpos(kSz11, params, 0.5, -10.0, 10.0, 501);
    auto fine = solve_G0_Dpos(kSz11, params, 0.5, -10.0, 10.0, 1001);
    double rc = ode_residual(coarse, kSz11, params);
    double rf = ode_residual(fine, kSz11, params);
    CHECK(rc >= 4.0 * rf);
}

TEST_CASE("stored derivative of Gamma matches finite differences") {
    RegimeParams params{0.0, 1.0, 1.0};
    auto p = solve_G0_Dpos(kSz11, params, 0.5, -30.0, 30.0, 6001);
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < p.size(); ++i) {
        std::vector<double> nodes(p.xi.begin() + static_cast<std::ptrdiff_t>(i - 2),
                                  p.xi.begin() + static_cast<std::ptrdiff_t>(i + 3));
        auto w = fd_weights(nodes, p.xi[i], 1);
        double fd = 0.0;
        for (std::size_t k = 0; k < 5; ++k) fd += w[k] * p.Gamma[i - 2 + k];
        // stored slope comes from the implicit relation itself
        double recon = p.Gamma[i] /
                       (p.Gamma[i] * kSz11.sigma_prime(p.Gamma[i]) * p.H[i] - params.D);
        worst = std::max(worst, std::abs(fd - recon));
        CHECK(std::abs(p.dGamma[i] - recon) < 1e-12);
    }
    CHECK(worst < 1e-6);
}
