#include "twfilm/phase_plane.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "twfilm/numerics.hpp"

namespace twfilm {

namespace {

void check_gpos_dpos(const RegimeParams& params) {
    params.validate();
    if (!(params.G > 0.0 && params.D > 0.0)) {
        throw DomainError("phase-plane analysis requires G > 0 and D > 0");
    }
}

void check_state(double H, double Gamma) {
    if (!(H > 0.0)) throw DomainError("H must be positive");
    if (!(Gamma > 0.0 && Gamma < 1.0)) throw DomainError("Gamma must lie in (0,1)");
}

}  // namespace

const char* quadrant_name(Quadrant q) {
    switch (q) {
        case Quadrant::Q1: return "Q1";
        case Quadrant::Q2: return "Q2";
        case Quadrant::Q3: return "Q3";
        case Quadrant::Q4: return "Q4";
    }
    throw Error("unreachable quadrant");
}

double f1(const SurfaceTension& model, const RegimeParams& params, double H, double Gamma) {
    check_gpos_dpos(params);
    check_state(H, Gamma);
    const double rho = model.rho(Gamma);
    const double Hs = params.H_star;
    const double num = 6.0 * Gamma * H * (2.0 * Hs - H) - 12.0 * params.D * (H - Hs) * rho;
    const double den = params.G * H * H * H * (Gamma * H + 4.0 * params.D * rho);
    return num / den;
}

double f2(const SurfaceTension& model, const RegimeParams& params, double H, double Gamma) {
    check_gpos_dpos(params);
    check_state(H, Gamma);
    const double rho = model.rho(Gamma);
    const double num = 2.0 * Gamma * (H - 3.0 * params.H_star) * rho;
    const double den = H * (Gamma * H + 4.0 * params.D * rho);
    return num / den;
}

double phi_eval(const RegimeParams& params, double H) {
    params.validate();
    if (!(params.D > 0.0)) throw DomainError("phi requires D > 0");
    const double Hs = params.H_star;
    if (!(H > Hs && H < 2.0 * Hs)) throw DomainError("phi: H must lie in (H*, 2H*)");
    return H * (2.0 * Hs - H) / (2.0 * params.D * (H - Hs));
}

double g_eval(const SurfaceTension& model, double Gamma) {
    if (!(Gamma > 0.0 && Gamma < 1.0)) throw DomainError("g: Gamma must lie in (0,1)");
    return model.rho(Gamma) / Gamma;
}

double critical_height(const SurfaceTension& model, const RegimeParams& params, double Gamma) {
    check_gpos_dpos(params);
    const double target = g_eval(model, Gamma);
    const double Hs = params.H_star;
    // phi decreases from +inf to 0 on (H*, 2H*); bracket inside the open
    // interval and bisect. Endpoint margins sized so phi still straddles
    // the target.
    double lo = Hs;
    double hi = 2.0 * Hs;
    double margin = 1e-14 * Hs;
    while (phi_eval(params, lo + margin) < target) margin *= 0.5;
    lo += margin;
    margin = 1e-14 * Hs;
    while (phi_eval(params, hi - margin) > target) margin *= 0.5;
    hi -= margin;
    double root = bisect([&](double H) { return phi_eval(params, H) - target; }, lo, hi,
                         1e-12 * Hs);
    return root;
}

double mu_lower_bound(const SurfaceTension& model, const RegimeParams& params) {
    check_gpos_dpos(params);
    if (!model.compliant()) {
        throw ComplianceError("mu_lower_bound requires a compliant isotherm");
    }
    auto value = [&](double g) { return g * params.H_star + 4.0 * params.D * model.rho(g); };
    const int n = 4096;
    double best = value(0.0);
    int best_i = 0;
    for (int i = 1; i <= n; ++i) {
        double g = static_cast<double>(i) / n;
        double v = value(g);
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    double lo = std::max(0.0, (best_i - 1.0) / n);
    double hi = std::min(1.0, (best_i + 1.0) / n);
    double arg = golden_section_min(value, lo, hi);
    return std::min(best, value(arg));
}

PhaseGeometry select_gamma_bar(const SurfaceTension& model, const RegimeParams& params) {
    check_gpos_dpos(params);
    if (!model.compliant()) {
        throw ComplianceError("select_gamma_bar requires a compliant isotherm");
    }
    const int n = 4096;
    // Scan grid over (0, 1/2]: gamma_k = k / (2n).
    std::vector<double> grid(n), gvals(n);
    for (int k = 0; k < n; ++k) {
        grid[k] = static_cast<double>(k + 1) / (2.0 * n);
        gvals[k] = g_eval(model, grid[k]);
    }
    // Longest strictly-decreasing prefix.
    int dec_prefix = 1;
    while (dec_prefix < n && gvals[dec_prefix] < gvals[dec_prefix - 1]) ++dec_prefix;

    // Samples of g on (1/2, 1) for the separation condition, combined with
    // suffix maxima over the upper part of the scan grid.
    const int m = 4096;
    std::vector<double> upper(m);
    for (int j = 0; j < m; ++j) {
        double g = 0.5 + (0.5 - 1e-9) * static_cast<double>(j + 1) / m;
        upper[j] = g_eval(model, g);
    }
    double upper_max = *std::max_element(upper.begin(), upper.end());
    std::vector<double> suffix_max(n + 1, upper_max);
    for (int k = n - 1; k >= 0; --k) {
        suffix_max[k] = std::max(gvals[k], suffix_max[k + 1]);
    }

    auto slope_condition = [&](double gb) {
        const double h = 1e-6;
        double rp = (model.rho(gb + h) - model.rho(gb - h)) / (2.0 * h);
        return gb * rp - model.rho(gb) < 0.0;
    };

    std::string failure = "no grid point in (0, 1/2] qualifies";
    for (int k = std::min(dec_prefix, n) - 1; k >= 0; --k) {
        // (a) strict decrease up to grid[k] holds by construction of the prefix.
        // (b) everything sampled beyond grid[k] stays below g(grid[k]).
        if (!(suffix_max[k + 1] < gvals[k])) {
            if (k == std::min(dec_prefix, n) - 1) {
                failure = "separation condition g(Gamma) < g(gamma_bar) fails beyond every "
                          "decreasing-prefix candidate";
            }
            continue;
        }
        // (c) one-sided slope of g at the candidate.
        if (!slope_condition(grid[k])) {
            if (k == std::min(dec_prefix, n) - 1) {
                failure = "slope condition gamma rho'(gamma) - rho(gamma) < 0 fails";
            }
            continue;
        }
        PhaseGeometry geo;
        geo.gamma_bar = grid[k];
        geo.H_bar = critical_height(model, params, geo.gamma_bar);
        geo.mu = mu_lower_bound(model, params);
        return geo;
    }
    throw ConvergenceError("select_gamma_bar: " + failure);
}

Quadrant classify_quadrant(const PhaseGeometry& geometry, const RegimeParams& params, double H,
                           double Gamma) {
    const double Hs = params.H_star;
    if (!(H >= Hs && H <= 2.0 * Hs && Gamma > 0.0 && Gamma < 1.0)) {
        throw DomainError("classify_quadrant: point outside [H*,2H*] x (0,1)");
    }
    if (H <= geometry.H_bar) {
        return Gamma <= geometry.gamma_bar ? Quadrant::Q1 : Quadrant::Q2;
    }
    return Gamma <= geometry.gamma_bar ? Quadrant::Q4 : Quadrant::Q3;
}

}  // namespace twfilm
