#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twfilm/numerics.hpp"
#include "twfilm/phase_plane.hpp"
#include "twfilm/profile.hpp"
#include "twfilm/surface_tension.hpp"

namespace twfilm {

// Construction of the heteroclinic orbit of the G > 0, D > 0 system
// connecting (2H*, 1) to (H*, 0). Trajectories are classified by which
// wall of the rectangle their backward continuation from the section
// H = H_bar exits through; bisection on the section ordinate pins the
// connecting orbit.

/// The reduced field (f1, f2) at (H, Gamma).
std::pair<double, double> vector_field(const SurfaceTension& model, const RegimeParams& params,
                                       double H, double Gamma);

/// Ordinate X_l(Gamma0): forward trajectory from (H*, Gamma0) followed to
/// its crossing of H = H_bar into Q1. Returns nullopt for trajectories
/// that enter Q1 without ever crossing H_bar (courses that stay left).
std::optional<double> crossing_ordinate_left(const SurfaceTension& model,
                                             const RegimeParams& params,
                                             const PhaseGeometry& geometry, double Gamma0);

/// Ordinate X_r(Gamma0): forward trajectory from (2H*, Gamma0) followed to
/// its unique crossing of H = H_bar into Q1.
double crossing_ordinate_right(const SurfaceTension& model, const RegimeParams& params,
                               const PhaseGeometry& geometry, double Gamma0);

/// The separating start ordinate on the wall H = H*: trajectories from
/// (H*, Gamma0) cross Gamma = gamma_bar below H_bar for Gamma0 below it
/// and cross H = H_bar above gamma_bar for Gamma0 above it. Located by
/// bisection to width tol.
double gamma_0s(const SurfaceTension& model, const RegimeParams& params,
                const PhaseGeometry& geometry, double tol);

enum class ExitSide { Left, Right, Inconclusive };

struct ShootingOptions {
    double tol_bisect = 1e-12;
    double eps_saddle = 1e-3;
    double xi_span_max = 200.0;
    double sample_spacing = 0.01;
    // Each assembled branch covers at least this much of the xi axis even
    // after entering its eps ball (capped at xi_span_max); the endpoint
    // distances only shrink with the extension.
    double min_half_span = 22.0;
    // Trial and assembly integrations share one flow accuracy; the backward
    // direction amplifies any mismatch between them.
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    int scan_points = 64;
};

struct TrialRecord {
    double gamma = 0.0;
    ExitSide side = ExitSide::Inconclusive;
    bool entered_saddle_box = false;
};

struct ShootingDiagnostics {
    std::vector<TrialRecord> trial_log;  // scan first, then bisection trials
    int bisect_iterations = 0;
    std::string backward_termination;
    std::string forward_termination;
    double backward_end_distance = 0.0;  // |H - 2H*| + |1 - Gamma| at the left end
    double forward_end_distance = 0.0;   // |H - H*| + Gamma at the right end
    bool degenerate = false;             // bracket collapsed without a side flip
};

struct ShootingOutcome {
    double gamma_star = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    PhaseGeometry geometry;
    Profile profile;
    ShootingDiagnostics diagnostics;
};

/// Full heteroclinic construction: builds the phase geometry, brackets the
/// section ordinate by a coarse scan, bisects on the backward exit side to
/// width tol_bisect, and assembles the profile with xi = 0 anchored at the
/// crossing (H_bar, gamma_star).
ShootingOutcome heteroclinic(const SurfaceTension& model, const RegimeParams& params,
                             const ShootingOptions& opts = {});

}  // namespace twfilm
