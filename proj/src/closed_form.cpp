#include "twfilm/closed_form.hpp"

#include <algorithm>
#include <cmath>

#include "twfilm/version.hpp"

namespace twfilm {

namespace {

void require_singular_isotherm(const SurfaceTension& model, const char* what) {
    if (!model.compliant()) {
        throw ComplianceError(std::string(what) +
                              " requires an isotherm with non-integrable sigma' "
                              "(szyszkowski or frumkin)");
    }
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    if (!(lo < hi)) throw DomainError("xi_min must be less than xi_max");
    if (n < 2) throw DomainError("need at least 2 samples");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    g.back() = hi;
    return g;
}

ProfileMeta base_meta(const SurfaceTension& model, const RegimeParams& params,
                      const std::string& anchor) {
    ProfileMeta meta;
    meta.model_spec = model.spec_string();
    meta.params = params;
    meta.anchor = anchor;
    meta.tool_version = kToolVersion;
    return meta;
}

// Enforce exact non-increase; root polishing may leave ulp-scale wiggles.
void clamp_monotone_gamma(std::vector<double>& gamma) {
    for (std::size_t i = 1; i < gamma.size(); ++i) {
        gamma[i] = std::min(gamma[i], gamma[i - 1]);
    }
}

}  // namespace

Profile solve_G0_D0(const SurfaceTension& model, const RegimeParams& params, double xi_min,
                    double xi_max, std::size_t samples) {
    params.validate();
    if (params.regime() != Regime::G0_D0) throw DomainError("solve_G0_D0 requires G = 0, D = 0");
    require_singular_isotherm(model, "solve_G0_D0");
    if (!(xi_min < 0.0 && 0.0 < xi_max)) throw DomainError("requires xi_min < 0 < xi_max");

    const double Hs = params.H_star;
    const double s0 = model.sigma0();
    auto gamma_left = [&](double xi) { return model.sigma_inverse(s0 + xi / (2.0 * Hs)); };
    auto dgamma_left = [&](double g) { return -model.rho(g) / (2.0 * Hs); };

    Profile p;
    p.meta = base_meta(model, params, "kink at xi=0");
    p.kink_locations = {0.0};
    for (double xi : uniform_grid(xi_min, xi_max, samples)) {
        if (xi == 0.0) continue;  // replaced by the kink pair
        p.xi.push_back(xi);
        if (xi < 0.0) {
            double g = gamma_left(xi);
            p.H.push_back(2.0 * Hs);
            p.Gamma.push_back(g);
            p.dH.push_back(0.0);
            p.dGamma.push_back(dgamma_left(g));
        } else {
            p.H.push_back(Hs);
            p.Gamma.push_back(0.0);
            p.dH.push_back(0.0);
            p.dGamma.push_back(0.0);
        }
        p.flags.push_back(SampleFlag::Smooth);
    }
    // Insert the kink pair at xi = 0 (H is double-valued there).
    auto pos = std::lower_bound(p.xi.begin(), p.xi.end(), 0.0) - p.xi.begin();
    p.xi.insert(p.xi.begin() + pos, 2, 0.0);
    p.H.insert(p.H.begin() + pos, {2.0 * Hs, Hs});
    p.Gamma.insert(p.Gamma.begin() + pos, 2, 0.0);
    p.dH.insert(p.dH.begin() + pos, 2, 0.0);
    p.dGamma.insert(p.dGamma.begin() + pos, {dgamma_left(0.0), 0.0});
    p.flags.insert(p.flags.begin() + pos, {SampleFlag::KinkLeft, SampleFlag::KinkRight});

    clamp_monotone_gamma(p.Gamma);
    p.validate();
    return p;
}

double height_from_gamma(const SurfaceTension& model, const RegimeParams& params, double gamma) {
    params.validate();
    if (!(params.D > 0.0)) throw DomainError("height_from_gamma requires D > 0");
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0,1)");
    const double D = params.D;
    const double Hs = params.H_star;
    const double s = gamma * model.sigma_prime(gamma);
    // Conjugate form of the quadratic root: exact at both tails.
    return 2.0 * D * Hs / (D + s * Hs + std::hypot(D, s * Hs));
}

namespace {

// Integrand of the implicit profile relation, d(xi)/d(Gamma).
double xi_integrand(const SurfaceTension& model, const RegimeParams& params, double z) {
    const double s = z * model.sigma_prime(z);
    return (s * params.H_star - std::hypot(params.D, s * params.H_star)) / z;
}

struct XiTable {
    std::vector<double> gamma;  // ascending
    std::vector<double> xi;     // descending (xi is a decreasing function of Gamma)

    std::size_t bracket_for_xi(double target) const {
        // Find k with xi[k] >= target >= xi[k+1].
        std::size_t lo = 0, hi = xi.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (xi[mid] >= target) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return lo;
    }
};

XiTable build_xi_table(const SurfaceTension& model, const RegimeParams& params,
                       double gamma_anchor, double xi_min, double xi_max) {
    auto F = [&](double z) { return xi_integrand(model, params, z); };
    const double quad_tol = 1e-13;
    const double slack = 2.0;
    const double u_floor = 1e-15;     // 1 - Gamma floor toward the coated end
    const double gamma_floor = 1e-300;
    const std::size_t max_nodes = 60000;

    XiTable up;  // anchor -> 1
    up.gamma = {gamma_anchor};
    up.xi = {0.0};
    {
        // Geometric in u = 1 - Gamma; the integrand ~ 2 H* sigma'(z) there,
        // so geometric u steps give near-uniform xi steps.
        double sigma_target =
            model.sigma(gamma_anchor) + (xi_min - 2.0 * slack) / (2.0 * params.H_star);
        double u_target = 1.0 - model.sigma_inverse(sigma_target);
        u_target = std::max(u_target, u_floor);
        double u = 1.0 - gamma_anchor;
        double ratio = std::pow(u_target / u, 1.0 / 256.0);
        ratio = std::min(ratio, 0.999);
        while (up.xi.back() > xi_min - slack && u > u_floor * 1.0000001 &&
               up.gamma.size() < max_nodes) {
            double u_next = std::max(u * ratio, u_floor);
            double g_prev = up.gamma.back();
            double g_next = 1.0 - u_next;
            double dxi = quad_adaptive([&](double z) { return F(z); }, g_prev, g_next,
                                       quad_tol);
            up.gamma.push_back(g_next);
            up.xi.push_back(up.xi.back() + dxi);
            u = u_next;
        }
        if (up.xi.back() > xi_min - 1.0) {
            throw ConvergenceError("solve_G0_Dpos: xi_min is beyond the representable range");
        }
    }

    XiTable down;  // anchor -> 0
    down.gamma = {gamma_anchor};
    down.xi = {0.0};
    {
        double g_target = gamma_anchor * std::exp(-(xi_max + 2.0 * slack) / params.D);
        g_target = std::max(g_target, gamma_floor);
        double ratio = std::pow(g_target / gamma_anchor, 1.0 / 256.0);
        ratio = std::min(ratio, 0.999);
        double g = gamma_anchor;
        while (down.xi.back() < xi_max + slack && g > gamma_floor * 10.0 &&
               down.gamma.size() < max_nodes) {
            double g_next = std::max(g * ratio, gamma_floor);
            // xi(g_next) = xi(g) - int_{g_next}^{g} F dz, and F < 0.
            double dxi = quad_adaptive([&](double z) { return F(z); }, g_next, g,
                                       quad_tol);
            down.gamma.push_back(g_next);
            down.xi.push_back(down.xi.back() - dxi);
            g = g_next;
        }
        if (down.xi.back() < xi_max + 1.0) {
            throw ConvergenceError("solve_G0_Dpos: xi_max is beyond the representable range");
        }
    }

    XiTable table;
    table.gamma.reserve(up.gamma.size() + down.gamma.size() - 1);
    table.xi.reserve(table.gamma.capacity());
    for (std::size_t i = down.gamma.size(); i-- > 1;) {
        table.gamma.push_back(down.gamma[i]);
        table.xi.push_back(down.xi[i]);
    }
    for (std::size_t i = 0; i < up.gamma.size(); ++i) {
        table.gamma.push_back(up.gamma[i]);
        table.xi.push_back(up.xi[i]);
    }
    return table;
}

double solve_gamma_at(const SurfaceTension& model, const RegimeParams& params,
                      const XiTable& table, const MonotoneCubic& guess, double xi_target) {
    auto F = [&](double z) { return xi_integrand(model, params, z); };
    std::size_t k = table.bracket_for_xi(xi_target);
    double g_lo = table.gamma[k];      // xi(g_lo) >= xi_target
    double g_hi = table.gamma[k + 1];  // xi(g_hi) <= xi_target
    auto xi_of = [&](double g) {
        if (g == table.gamma[k]) return table.xi[k];
        return table.xi[k] + quad_adaptive(F, table.gamma[k], g, 1e-14);
    };
    double g = std::clamp(guess.eval(xi_target), g_lo, g_hi);
    const double tol = 1e-12 * std::max(1.0, std::abs(xi_target));
    for (int it = 0; it < 60; ++it) {
        double err = xi_of(g) - xi_target;
        if (std::abs(err) <= tol) return g;
        if (err > 0.0) {
            g_lo = g;  // xi too high: Gamma must grow? xi decreasing in Gamma -> increase g
        } else {
            g_hi = g;
        }
        double step = -err / F(g);
        double g_next = g + step;
        if (!(g_next > g_lo && g_next < g_hi)) g_next = 0.5 * (g_lo + g_hi);
        if (g_next == g) break;
        g = g_next;
    }
    return g;
}

}  // namespace

Profile solve_G0_Dpos(const SurfaceTension& model, const RegimeParams& params,
                      double gamma_anchor, double xi_min, double xi_max, std::size_t samples) {
    params.validate();
    if (params.regime() != Regime::G0_Dpos) {
        throw DomainError("solve_G0_Dpos requires G = 0, D > 0");
    }
    require_singular_isotherm(model, "solve_G0_Dpos");
    if (!(gamma_anchor > 0.0 && gamma_anchor < 1.0)) {
        throw DomainError("gamma_anchor must lie in (0,1)");
    }

    XiTable table = build_xi_table(model, params, gamma_anchor, xi_min, xi_max);
    // Interpolation guess: Gamma as a monotone function of xi.
    std::vector<double> xs(table.xi.rbegin(), table.xi.rend());
    std::vector<double> gs(table.gamma.rbegin(), table.gamma.rend());
    MonotoneCubic guess(std::move(xs), std::move(gs));

    auto dgamma_at = [&](double g) { return 1.0 / xi_integrand(model, params, g); };
    auto dheight_dgamma = [&](double g) {
        const double D = params.D;
        const double Hs = params.H_star;
        double s = g * model.sigma_prime(g);
        double R = std::hypot(D, s * Hs);
        double denom = D + s * Hs + R;
        double dHds = -2.0 * D * Hs * Hs * (1.0 + s * Hs / R) / (denom * denom);
        double delta = 1e-7;
        delta = std::min({delta, 0.5 * g, 0.5 * (1.0 - g)});
        double dsdg = (( g + delta) * model.sigma_prime(g + delta) -
                       ( g - delta) * model.sigma_prime(g - delta)) /
                      (2.0 * delta);
        return dHds * dsdg;
    };

    Profile p;
    p.meta = base_meta(model, params, "Gamma(0)=gamma_anchor");
    p.meta.set_extra("gamma_anchor", gamma_anchor);
    for (double xi : uniform_grid(xi_min, xi_max, samples)) {
        double g = (xi == 0.0) ? gamma_anchor : solve_gamma_at(model, params, table, guess, xi);
        double dg = dgamma_at(g);
        p.xi.push_back(xi);
        p.Gamma.push_back(g);
        p.H.push_back(height_from_gamma(model, params, g));
        p.dGamma.push_back(dg);
        p.dH.push_back(dheight_dgamma(g) * dg);
        p.flags.push_back(SampleFlag::Smooth);
    }
    clamp_monotone_gamma(p.Gamma);
    p.validate();
    return p;
}

Profile solve_Gpos_D0(const SurfaceTension& model, const RegimeParams& params, double xi_min,
                      double xi_max, std::size_t samples) {
    params.validate();
    if (params.regime() != Regime::Gpos_D0) {
        throw DomainError("solve_Gpos_D0 requires G > 0, D = 0");
    }
    require_singular_isotherm(model, "solve_Gpos_D0");
    if (!(xi_min < 0.0 && 0.0 < xi_max)) throw DomainError("requires xi_min < 0 < xi_max");

    const double Hs = params.H_star;
    const double G = params.G;
    const double s0 = model.sigma0();
    auto gamma_left = [&](double xi) { return model.sigma_inverse(s0 + xi / (2.0 * Hs)); };
    auto dgamma_left = [&](double g) { return -model.rho(g) / (2.0 * Hs); };
    auto hhat_field = [&](double H) { return 3.0 * (Hs - H) / (G * H * H * H); };

    std::vector<double> grid = uniform_grid(xi_min, xi_max, samples);

    // Right branch: integrate H' from H(0) = 2H* through the positive grid.
    IntegrateOptions opts;
    opts.rel_tol = 1e-12;
    opts.abs_tol = 1e-14;
    for (double xi : grid) {
        if (xi > 0.0) opts.sample_at.push_back(xi);
    }
    OrbitTrace<1> hat;
    if (!opts.sample_at.empty()) {
        auto field = [&](double, const std::array<double, 1>& y) {
            return std::array<double, 1>{hhat_field(y[0])};
        };
        hat = integrate_adaptive<1>(field, {0.0, {2.0 * Hs}}, xi_max + 1e-9, {}, opts);
        if (hat.termination != Termination::SpanExhausted || hat.size() < opts.sample_at.size()) {
            throw ConvergenceError("solve_Gpos_D0: tail integration failed");
        }
    }

    Profile p;
    p.meta = base_meta(model, params, "kink at xi=0");
    p.kink_locations = {0.0};
    std::size_t tail_idx = 0;
    bool kink_inserted = false;
    auto insert_kink = [&]() {
        p.xi.insert(p.xi.end(), 2, 0.0);
        p.H.insert(p.H.end(), 2, 2.0 * Hs);
        p.Gamma.insert(p.Gamma.end(), 2, 0.0);
        p.dH.insert(p.dH.end(), {0.0, hhat_field(2.0 * Hs)});
        p.dGamma.insert(p.dGamma.end(), {dgamma_left(0.0), 0.0});
        p.flags.insert(p.flags.end(), {SampleFlag::KinkLeft, SampleFlag::KinkRight});
        kink_inserted = true;
    };
    for (double xi : grid) {
        if (xi == 0.0) continue;
        if (xi > 0.0 && !kink_inserted) insert_kink();
        p.xi.push_back(xi);
        if (xi < 0.0) {
            double g = gamma_left(xi);
            p.H.push_back(2.0 * Hs);
            p.Gamma.push_back(g);
            p.dH.push_back(0.0);
            p.dGamma.push_back(dgamma_left(g));
        } else {
            double H = hat.states[tail_idx++][0];
            p.H.push_back(H);
            p.Gamma.push_back(0.0);
            p.dH.push_back(hhat_field(H));
            p.dGamma.push_back(0.0);
        }
        p.flags.push_back(SampleFlag::Smooth);
    }
    if (!kink_inserted) insert_kink();

    clamp_monotone_gamma(p.Gamma);
    p.validate();
    return p;
}

AuxiliaryOrbit auxiliary_orbit(const SurfaceTension& model, const RegimeParams& params, double H0,
                               double Gamma0, double span) {
    params.validate();
    if (!(params.G > 0.0)) throw DomainError("auxiliary_orbit requires G > 0");
    require_singular_isotherm(model, "auxiliary_orbit");
    if (!(H0 > 0.0)) throw DomainError("H0 must be positive");
    if (!(Gamma0 > 0.0 && Gamma0 < 1.0)) throw DomainError("Gamma0 must lie in (0,1)");
    if (!(span > 0.0)) throw DomainError("span must be positive");

    const double Hs = params.H_star;
    const double G = params.G;
    auto field = [&](double, const std::array<double, 2>& y) {
        double H = y[0], g = y[1];
        if (!(H != 0.0 && g >= 0.0 && g < 1.0)) {
            return std::array<double, 2>{std::numeric_limits<double>::quiet_NaN(),
                                         std::numeric_limits<double>::quiet_NaN()};
        }
        return std::array<double, 2>{6.0 * (2.0 * Hs - H) / (G * H * H * H),
                                     2.0 * (3.0 * Hs - H) / (H * H * model.sigma_prime(g))};
    };
    std::vector<EventSpec<2>> events;
    events.push_back({kAuxEventHZero,
                      [Hs](double, const std::array<double, 2>& y) { return y[0] - 1e-9 * Hs; },
                      EventDirection::Falling, true});
    events.push_back({kAuxEventHTwoHStar,
                      [Hs](double, const std::array<double, 2>& y) { return y[0] - 2.0 * Hs; },
                      EventDirection::Any, true});
    events.push_back({kAuxEventGammaZero,
                      [](double, const std::array<double, 2>& y) { return y[1] - 1e-12; },
                      EventDirection::Falling, true});
    events.push_back({kAuxEventGammaOne,
                      [](double, const std::array<double, 2>& y) { return y[1] - (1.0 - 1e-12); },
                      EventDirection::Rising, true});

    AuxiliaryOrbit orbit;
    orbit.forward = integrate_adaptive<2>(field, {0.0, {H0, Gamma0}}, span, events);
    orbit.backward = integrate_adaptive<2>(field, {0.0, {H0, Gamma0}}, -span, events);
    // The blow-down H -> 0 has H ~ (xi + xi_alpha)^{1/4} with unbounded
    // slope; the integrator underflows its step just short of the endpoint.
    // Report that as the H -> 0 event at the achieved xi.
    for (OrbitTrace<2>* tr : {&orbit.forward, &orbit.backward}) {
        if (tr->termination == Termination::StepUnderflow && !tr->states.empty() &&
            tr->back_state()[0] <= 1e-2 * Hs) {
            tr->termination = Termination::EventHit;
            tr->event_id = kAuxEventHZero;
            tr->event_xi = tr->xi.back();
        }
    }
    if (std::abs(H0 - 2.0 * Hs) <= 1e-12 * std::max(1.0, 2.0 * Hs)) {
        orbit.course = AuxCourse::CaseI;
        orbit.xi_omega_predicted = 2.0 * Hs * (model.sigma0() - model.sigma(Gamma0));
        orbit.xi_omega_consistent =
            orbit.forward.termination == Termination::EventHit &&
            orbit.forward.event_id == kAuxEventGammaZero &&
            std::abs(orbit.forward.event_xi - orbit.xi_omega_predicted) <=
                1e-6 * std::max(1.0, orbit.xi_omega_predicted);
    } else {
        orbit.course = H0 < 2.0 * Hs ? AuxCourse::CaseII : AuxCourse::CaseIII;
    }
    return orbit;
}

}  // namespace twfilm
