#pragma once

#include "twfilm/numerics.hpp"
#include "twfilm/profile.hpp"
#include "twfilm/surface_tension.hpp"

namespace twfilm {

// Traveling-wave profiles for the regimes with (semi-)explicit solutions.
// All constructions normalize the wave speed to 1 and use the translation
// anchors fixed here: the kink sits at xi = 0 for the D = 0 regimes, and
// Gamma(0) = gamma_anchor for G = 0, D > 0.

/// G = 0, D = 0: piecewise-constant H (2H* left of 0, H* right of 0) and
/// Gamma(xi) = sigma^{-1}(sigma0 + xi/(2H*)) on xi <= 0, 0 afterwards.
/// Both one-sided values are stored at xi = 0 as a kink pair.
Profile solve_G0_D0(const SurfaceTension& model, const RegimeParams& params, double xi_min,
                    double xi_max, std::size_t samples);

/// G = 0, D > 0: the unique positive root of the quadratic height relation,
/// H = 2 D H* / (D + s H* + sqrt(D^2 + (s H*)^2)) with s = gamma sigma'(gamma).
/// Guaranteed H* < H < 2H*.
double height_from_gamma(const SurfaceTension& model, const RegimeParams& params, double gamma);

/// G = 0, D > 0: Gamma(xi) from the implicit quadrature relation
/// xi(Gamma) = int [z sigma'(z) H* - sqrt(D^2 + (z sigma'(z) H*)^2)] / z dz,
/// tabulated on a geometric Gamma-grid, interpolated monotonically and
/// polished by Newton at every output sample; H from height_from_gamma.
Profile solve_G0_Dpos(const SurfaceTension& model, const RegimeParams& params,
                      double gamma_anchor, double xi_min, double xi_max, std::size_t samples);

/// G > 0, D = 0: for xi <= 0, H = 2H* with the same Gamma branch as the
/// G = 0, D = 0 case; for xi >= 0, Gamma = 0 and H integrates
/// H' = 3 (H* - H) / (G H^3) from H(0) = 2H*. Kink recorded at xi = 0.
Profile solve_Gpos_D0(const SurfaceTension& model, const RegimeParams& params, double xi_min,
                      double xi_max, std::size_t samples);

enum class AuxCourse { CaseI, CaseII, CaseIII };

/// Events reported by auxiliary_orbit traces.
enum AuxEvent : int {
    kAuxEventHZero = 1,
    kAuxEventHTwoHStar = 2,
    kAuxEventGammaZero = 3,
    kAuxEventGammaOne = 4,
};

struct AuxiliaryOrbit {
    OrbitTrace<2> forward;                 // state = (H, Gamma)
    OrbitTrace<2> backward;
    AuxCourse course = AuxCourse::CaseI;
    double xi_omega_predicted = 0.0;       // CaseI only: 2 H* (sigma0 - sigma(Gamma0))
    bool xi_omega_consistent = false;      // CaseI only: forward end matches the prediction
};

/// Integrates the auxiliary system H^3 H' = (6/G)(2H* - H),
/// H^2 sigma'(Gamma) Gamma' = 2 (3H* - H) forward and backward from
/// (H0, Gamma0), with events at H -> 0, H -> 2H* crossings, Gamma -> 0 and
/// Gamma -> 1. The course label follows the position of H0 relative to 2H*.
AuxiliaryOrbit auxiliary_orbit(const SurfaceTension& model, const RegimeParams& params, double H0,
                               double Gamma0, double span);

}  // namespace twfilm
