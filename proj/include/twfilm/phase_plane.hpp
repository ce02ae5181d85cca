#pragma once

#include "twfilm/profile.hpp"
#include "twfilm/surface_tension.hpp"

namespace twfilm {

// The G > 0, D > 0 phase plane: the reduced vector field (f1, f2) on
// (0,inf) x (0,1), its nullcline geometry H_c(Gamma) inside the rectangle
// [H*, 2H*] x (0,1), the splitting point (gamma_bar, H_bar), the quadrant
// decomposition around it, and the positive lower bound mu for
// Gamma H + 4 D rho(Gamma).

enum class Quadrant { Q1, Q2, Q3, Q4 };

const char* quadrant_name(Quadrant q);

struct PhaseGeometry {
    double gamma_bar = 0.0;  // in (0, 1/2]
    double H_bar = 0.0;      // = H_c(gamma_bar), in (H*, 2H*)
    double mu = 0.0;         // min of Gamma H* + 4 D rho(Gamma), positive
};

/// f1: the H-component of the reduced field,
/// [6 Gamma H (2H* - H) - 12 D (H - H*) rho(Gamma)] / [G H^3 (Gamma H + 4 D rho)].
double f1(const SurfaceTension& model, const RegimeParams& params, double H, double Gamma);

/// f2: the Gamma-component, 2 Gamma (H - 3H*) rho(Gamma) / [H (Gamma H + 4 D rho)].
double f2(const SurfaceTension& model, const RegimeParams& params, double H, double Gamma);

/// phi(H) = H (2H* - H) / (2 D (H - H*)); strictly decreasing on (H*, 2H*)
/// with range (0, inf).
double phi_eval(const RegimeParams& params, double H);

/// g(Gamma) = rho(Gamma) / Gamma.
double g_eval(const SurfaceTension& model, double Gamma);

/// The unique root H_c of phi(H) = g(Gamma) in (H*, 2H*); f1(H_c, Gamma) = 0.
double critical_height(const SurfaceTension& model, const RegimeParams& params, double Gamma);

/// Lower bound mu for Gamma H + 4 D rho(Gamma) over (H*,2H*) x (0,1):
/// minimum of Gamma H* + 4 D rho(Gamma) over the Gamma grid, polished by
/// golden-section search.
double mu_lower_bound(const SurfaceTension& model, const RegimeParams& params);

/// Selects gamma_bar as the largest grid point of (0, 1/2] such that
/// g is strictly decreasing up to it, g stays below g(gamma_bar) beyond it,
/// and the one-sided slope condition gamma rho'(gamma) - rho(gamma) < 0
/// holds there. Throws ConvergenceError when no grid point qualifies.
PhaseGeometry select_gamma_bar(const SurfaceTension& model, const RegimeParams& params);

/// Quadrant of (H, Gamma) within [H*, 2H*] x (0,1):
///   Q1 = [H*, Hb] x (0, Gb],  Q2 = [H*, Hb] x (Gb, 1),
///   Q3 = (Hb, 2H*] x (Gb, 1), Q4 = (Hb, 2H*] x (0, Gb].
Quadrant classify_quadrant(const PhaseGeometry& geometry, const RegimeParams& params, double H,
                           double Gamma);

}  // namespace twfilm
