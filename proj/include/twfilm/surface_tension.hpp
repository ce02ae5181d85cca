#pragma once

#include <string>

#include "twfilm/errors.hpp"

namespace twfilm {

enum class IsothermKind { Linear, Sheludko, Szyszkowski, Frumkin };

struct ComplianceReport {
    bool satisfies_i3 = false;        // sigma' not integrable on (0,1): sigma maps [0,1) onto (-inf, sigma0]
    bool satisfies_assumrho = false;  // rho = -1/sigma' locally Lipschitz on [0,1)
    std::string notes;
};

/// Surfactant-dependent surface tension sigma(gamma) on gamma in [0,1).
///
/// Supported isotherms:
///   linear       sigma0*(1 - gamma)
///   sheludko     sigma0*beta*[((1+theta)/(1+theta*gamma))^3 - 1],
///                theta = ((beta+1)/beta)^(1/3) - 1
///   szyszkowski  sigma0 + a*ln(1-gamma)
///   frumkin      sigma0 + a*ln(1-gamma) + b*gamma^2, requires b < 2a
///
/// All derivatives are analytic. rho(gamma) = -1/sigma'(gamma) extends
/// continuously to gamma = 1 with rho(1) = 0 for the singular isotherms
/// (szyszkowski, frumkin); the bounded isotherms (linear, sheludko) keep
/// rho(1) > 0 and are rejected by constructions that need the singularity.
class SurfaceTension {
   public:
    static SurfaceTension linear(double sigma0);
    static SurfaceTension sheludko(double sigma0, double beta);
    static SurfaceTension szyszkowski(double sigma0, double a);
    static SurfaceTension frumkin(double sigma0, double a, double b);

    /// Parses a model spec string: "linear:s0", "sheludko:s0:beta",
    /// "szyszkowski:s0:a", "frumkin:s0:a:b". Throws ParseError.
    static SurfaceTension parse(const std::string& spec);

    IsothermKind kind() const { return kind_; }
    double sigma0() const { return sigma0_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double beta() const { return beta_; }

    /// sigma(gamma); domain [0,1).
    double sigma(double gamma) const;

    /// sigma'(gamma) < 0; domain [0,1).
    double sigma_prime(double gamma) const;

    /// rho(gamma) = -1/sigma'(gamma) on [0,1); rho(1) := 0 for compliant
    /// models. gamma = 1 on a non-compliant model throws ComplianceError.
    double rho(double gamma) const;

    /// Inverse of sigma: returns gamma in [0,1) with sigma(gamma) = s for
    /// s <= sigma0. Requires a compliant model (sigma onto (-inf, sigma0]).
    double sigma_inverse(double s) const;

    /// R_rho: sup of rho over [0,1), located numerically (1e4 grid plus
    /// golden-section polish).
    double rho_sup() const;

    ComplianceReport compliance() const;

    /// True when the model satisfies both (decreasing, non-integrable
    /// sigma') and the Lipschitz property of rho.
    bool compliant() const;

    /// Canonical spec string (round-trips through parse()).
    std::string spec_string() const;

   private:
    SurfaceTension(IsothermKind kind, double sigma0, double a, double b, double beta);

    IsothermKind kind_;
    double sigma0_;
    double a_;     // szyszkowski/frumkin
    double b_;     // frumkin
    double beta_;  // sheludko
    double theta_; // sheludko, derived from beta
};

}  // namespace twfilm
