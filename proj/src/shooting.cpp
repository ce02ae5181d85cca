#include "twfilm/shooting.hpp"

#include <algorithm>
#include <cmath>

#include "twfilm/version.hpp"

namespace twfilm {

namespace {

using State2 = std::array<double, 2>;

constexpr int kEventLeftWall = 1;    // H = H* crossing
constexpr int kEventRightWall = 2;   // H = 2H* crossing
constexpr int kEventSaddleBox = 3;   // l1 ball around (2H*, 1)
constexpr int kEventSinkBox = 4;     // l1 ball around (H*, 0)
constexpr int kEventGammaOne = 5;    // Gamma -> 1 guard
constexpr int kEventHbarCross = 6;   // H = H_bar crossing
constexpr int kEventGammaBarCross = 7;

struct FieldFn {
    const SurfaceTension* model;
    RegimeParams params;
    State2 operator()(double, const State2& y) const {
        // Trial RK stages may poke outside (0,inf) x (0,1); report those
        // states as invalid so the step controller backs off.
        if (!(y[0] > 0.0 && y[1] > 0.0 && y[1] < 1.0)) {
            return State2{std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::quiet_NaN()};
        }
        auto [dH, dG] = vector_field(*model, params, y[0], y[1]);
        return State2{dH, dG};
    }
};

const char* termination_name(const OrbitTrace<2>& tr) {
    switch (tr.termination) {
        case Termination::EventHit:
            switch (tr.event_id) {
                case kEventLeftWall: return "event:H=H*";
                case kEventRightWall: return "event:H=2H*";
                case kEventSaddleBox: return "event:saddle_box";
                case kEventSinkBox: return "event:sink_box";
                case kEventGammaOne: return "event:Gamma=1";
                case kEventHbarCross: return "event:H=H_bar";
                case kEventGammaBarCross: return "event:Gamma=gamma_bar";
                default: return "event:other";
            }
        case Termination::SpanExhausted: return "span_exhausted";
        case Termination::StepUnderflow: return "step_underflow";
        case Termination::StateInvalid: return "state_invalid";
    }
    return "unknown";
}

}  // namespace

std::pair<double, double> vector_field(const SurfaceTension& model, const RegimeParams& params,
                                       double H, double Gamma) {
    return {f1(model, params, H, Gamma), f2(model, params, H, Gamma)};
}

std::optional<double> crossing_ordinate_left(const SurfaceTension& model,
                                             const RegimeParams& params,
                                             const PhaseGeometry& geometry, double Gamma0) {
    if (!(Gamma0 > 0.0 && Gamma0 < 1.0)) throw DomainError("Gamma0 must lie in (0,1)");
    if (Gamma0 <= geometry.gamma_bar) return std::nullopt;  // Q1 is positively invariant

    FieldFn field{&model, params};
    const double Hb = geometry.H_bar;
    const double Gb = geometry.gamma_bar;
    double xi = 0.0;
    State2 y{params.H_star, Gamma0};
    for (int leg = 0; leg < 8; ++leg) {
        std::vector<EventSpec<2>> events;
        events.push_back({kEventHbarCross,
                          [Hb](double, const State2& s) { return s[0] - Hb; },
                          EventDirection::Falling, true});
        events.push_back({kEventGammaBarCross,
                          [Gb](double, const State2& s) { return s[1] - Gb; },
                          EventDirection::Falling, true});
        auto tr = integrate_adaptive<2>(field, {xi, y}, 500.0, events);
        if (tr.termination != Termination::EventHit) {
            throw ConvergenceError("crossing_ordinate_left: trajectory did not classify "
                                   "within the span");
        }
        xi = tr.event_xi;
        y = tr.back_state();
        if (tr.event_id == kEventHbarCross) {
            if (y[1] < Gb) return y[1];
            continue;  // grazing touch in Q3; keep going
        }
        // Crossed Gamma = gamma_bar.
        if (y[0] < Hb) return std::nullopt;  // entered Q1 from Q2
        // Passed from Q3 into Q4: wait for the H_bar crossing only.
        std::vector<EventSpec<2>> only_h;
        only_h.push_back({kEventHbarCross,
                          [Hb](double, const State2& s) { return s[0] - Hb; },
                          EventDirection::Falling, true});
        auto tr2 = integrate_adaptive<2>(field, {xi, y}, 500.0, only_h);
        if (tr2.termination != Termination::EventHit) {
            throw ConvergenceError("crossing_ordinate_left: no H_bar crossing after Q4 entry");
        }
        return tr2.back_state()[1];
    }
    throw ConvergenceError("crossing_ordinate_left: too many grazing restarts");
}

double crossing_ordinate_right(const SurfaceTension& model, const RegimeParams& params,
                               const PhaseGeometry& geometry, double Gamma0) {
    if (!(Gamma0 > 0.0 && Gamma0 < 1.0)) throw DomainError("Gamma0 must lie in (0,1)");
    FieldFn field{&model, params};
    const double Hb = geometry.H_bar;
    double xi = 0.0;
    State2 y{2.0 * params.H_star, Gamma0};
    for (int leg = 0; leg < 8; ++leg) {
        std::vector<EventSpec<2>> events;
        events.push_back({kEventHbarCross,
                          [Hb](double, const State2& s) { return s[0] - Hb; },
                          EventDirection::Falling, true});
        auto tr = integrate_adaptive<2>(field, {xi, y}, 500.0, events);
        if (tr.termination != Termination::EventHit) {
            throw ConvergenceError("crossing_ordinate_right: no H_bar crossing within the span");
        }
        xi = tr.event_xi;
        y = tr.back_state();
        if (y[1] < geometry.gamma_bar) return y[1];
        // Grazing touch with Gamma still above gamma_bar; continue.
    }
    throw ConvergenceError("crossing_ordinate_right: too many grazing restarts");
}

double gamma_0s(const SurfaceTension& model, const RegimeParams& params,
                const PhaseGeometry& geometry, double tol) {
    if (!(tol > 0.0)) throw DomainError("tol must be positive");
    FieldFn field{&model, params};
    const double Hb = geometry.H_bar;
    const double Gb = geometry.gamma_bar;

    // True when the trajectory from (H*, g0) crosses H = H_bar while still
    // above gamma_bar (course through Q3); false when it first crosses
    // Gamma = gamma_bar below H_bar (course into Q1).
    auto goes_right = [&](double g0) {
        std::vector<EventSpec<2>> events;
        events.push_back({kEventHbarCross,
                          [Hb](double, const State2& s) { return s[0] - Hb; },
                          EventDirection::Rising, true});
        events.push_back({kEventGammaBarCross,
                          [Gb](double, const State2& s) { return s[1] - Gb; },
                          EventDirection::Falling, true});
        auto tr = integrate_adaptive<2>(field, {0.0, State2{params.H_star, g0}}, 500.0, events);
        if (tr.termination != Termination::EventHit) {
            throw ConvergenceError("gamma_0s: trajectory did not classify within the span");
        }
        return tr.event_id == kEventHbarCross;
    };

    double lo = Gb + 1e-9 * (1.0 - Gb);  // course into Q1
    double hi = 1.0 - 1e-9;              // course through Q3
    if (goes_right(lo) || !goes_right(hi)) {
        throw ConvergenceError("gamma_0s: endpoint classification failed");
    }
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (goes_right(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

struct TrialOutcome {
    ExitSide side = ExitSide::Inconclusive;
    bool entered_box = false;
};

TrialOutcome classify_backward(const FieldFn& field, const PhaseGeometry& geometry,
                               const RegimeParams& params, double gamma,
                               const ShootingOptions& opts) {
    const double Hs = params.H_star;
    const double eps = 0.95 * opts.eps_saddle;
    std::vector<EventSpec<2>> events;
    events.push_back({kEventLeftWall,
                      [Hs](double, const State2& s) { return s[0] - Hs; },
                      EventDirection::Falling, true});
    events.push_back({kEventRightWall,
                      [Hs](double, const State2& s) { return s[0] - 2.0 * Hs; },
                      EventDirection::Rising, true});
    events.push_back({kEventGammaOne,
                      [](double, const State2& s) { return s[1] - (1.0 - 1e-13); },
                      EventDirection::Rising, true});
    events.push_back({kEventSaddleBox,
                      [Hs, eps](double, const State2& s) {
                          return std::abs(s[0] - 2.0 * Hs) + std::abs(1.0 - s[1]) - eps;
                      },
                      EventDirection::Falling, false});
    IntegrateOptions iopts;
    iopts.rel_tol = opts.rel_tol;
    iopts.abs_tol = opts.abs_tol;
    auto tr = integrate_adaptive<2>(field, {0.0, State2{geometry.H_bar, gamma}},
                                    -opts.xi_span_max, events, iopts);
    TrialOutcome out;
    out.entered_box = !tr.event_log.empty();
    if (tr.termination == Termination::EventHit) {
        if (tr.event_id == kEventRightWall) {
            out.side = ExitSide::Right;
        } else {
            out.side = ExitSide::Left;  // left wall or the Gamma -> 1 guard
        }
    }
    return out;
}

}  // namespace

ShootingOutcome heteroclinic(const SurfaceTension& model, const RegimeParams& params,
                             const ShootingOptions& opts) {
    params.validate();
    if (!(params.G > 0.0 && params.D > 0.0)) {
        throw DomainError("heteroclinic requires G > 0 and D > 0");
    }
    if (!model.compliant()) {
        throw ComplianceError("heteroclinic requires a compliant isotherm");
    }
    if (!(opts.tol_bisect > 0.0 && opts.eps_saddle > 0.0 && opts.xi_span_max > 0.0 &&
          opts.sample_spacing > 0.0)) {
        throw DomainError("heteroclinic: tolerances must be positive");
    }

    ShootingOutcome out;
    out.geometry = select_gamma_bar(model, params);
    FieldFn field{&model, params};
    const double Hs = params.H_star;
    const double Gb = out.geometry.gamma_bar;

    auto trial = [&](double gamma) {
        TrialOutcome t = classify_backward(field, out.geometry, params, gamma, opts);
        out.diagnostics.trial_log.push_back({gamma, t.side, t.entered_box});
        return t;
    };

    // Coarse scan over the section; the exit side is monotone in gamma.
    double lo = -1.0, hi = -1.0;
    {
        ExitSide prev_side = ExitSide::Inconclusive;
        double prev_gamma = 0.0;
        for (int j = 0; j < opts.scan_points; ++j) {
            double frac = 1e-4 + (1.0 - 2e-4) * static_cast<double>(j) /
                                     static_cast<double>(opts.scan_points - 1);
            double gamma = Gb * frac;
            TrialOutcome t = trial(gamma);
            if (t.side == ExitSide::Right) {
                lo = gamma;  // keep the highest right-exit seen
            } else if (t.side == ExitSide::Left && hi < 0.0) {
                hi = gamma;
                if (prev_side == ExitSide::Right) lo = prev_gamma;
                break;
            }
            prev_side = t.side;
            prev_gamma = gamma;
        }
    }
    if (lo < 0.0 || hi < 0.0 || !(lo < hi)) {
        throw ConvergenceError("heteroclinic: no exit-side sign change found on the section "
                               "(bracket failure)");
    }

    // Bisection on the exit side; target_width == 0 runs the bracket down
    // to double resolution.
    double gamma_star = 0.5 * (lo + hi);
    auto narrow = [&](double target_width) {
        while (hi - lo > target_width) {
            double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) {
                out.diagnostics.degenerate = target_width > 0.0;
                break;
            }
            TrialOutcome t = trial(mid);
            ++out.diagnostics.bisect_iterations;
            if (t.side == ExitSide::Right) {
                lo = mid;
            } else if (t.side == ExitSide::Left) {
                hi = mid;
            } else {
                // Within resolution the trial tracks the connection into
                // the saddle box and never exits; report the midpoint.
                if (!t.entered_box) {
                    throw ConvergenceError("heteroclinic: inconclusive trial (span exhausted "
                                           "before classification)");
                }
                out.diagnostics.degenerate = true;
                gamma_star = mid;
                return;
            }
            gamma_star = 0.5 * (lo + hi);
        }
    };
    narrow(opts.tol_bisect);
    out.gamma_star = gamma_star;
    out.bracket_lo = lo;
    out.bracket_hi = hi;

    // Assemble the profile through (H_bar, gamma_star). The assembly pass
    // runs tighter than the trials and caps the step size: downstream
    // residual checks difference the samples, and near Gamma -> 1 any
    // interpolation wiggle is amplified by sigma'.
    IntegrateOptions iopts;
    iopts.rel_tol = opts.rel_tol;
    iopts.abs_tol = opts.abs_tol;
    iopts.max_step = std::min(5.0 * opts.sample_spacing, 0.05);
    const double eps = 0.95 * opts.eps_saddle;
    const double ds = opts.sample_spacing;
    const std::size_t max_side = static_cast<std::size_t>(opts.xi_span_max / ds) + 1;

    // Each branch first runs until it enters its eps ball (failure to get
    // there is reported, not papered over), then extends toward the minimum
    // half-span so downstream asymptotics have room. The extension stops
    // early if the orbit leaves the ball again: close to the saddle any
    // leftover transverse error grows backward, and the profile must end
    // inside the ball.
    const double half_span = std::min(opts.min_half_span, opts.xi_span_max);
    const double dir_back = -1.0, dir_fwd = 1.0;
    auto assemble_branch = [&](double dir, bool include_zero) {
        const bool saddle_side = dir < 0.0;
        auto ball = [Hs, eps, saddle_side](double, const State2& s) {
            return saddle_side ? std::abs(s[0] - 2.0 * Hs) + std::abs(1.0 - s[1]) - eps
                               : std::abs(s[0] - Hs) + s[1] - eps;
        };
        const int ball_id = saddle_side ? kEventSaddleBox : kEventSinkBox;
        std::vector<EventSpec<2>> phase1;
        phase1.push_back({ball_id, ball, EventDirection::Falling, true});
        phase1.push_back({kEventLeftWall,
                          [Hs](double, const State2& s) { return s[0] - Hs; },
                          EventDirection::Falling, true});
        phase1.push_back({kEventRightWall,
                          [Hs](double, const State2& s) { return s[0] - 2.0 * Hs; },
                          EventDirection::Rising, true});
        IntegrateOptions popts = iopts;
        popts.sample_at.reserve(max_side);
        for (std::size_t i = include_zero ? 0 : 1; i < max_side; ++i) {
            popts.sample_at.push_back(dir * ds * static_cast<double>(i));
        }
        auto trace = integrate_adaptive<2>(field, {0.0, State2{out.geometry.H_bar, gamma_star}},
                                           dir * opts.xi_span_max, phase1, popts);
        std::string term = termination_name(trace);
        if (trace.termination != Termination::EventHit || trace.event_id != ball_id) {
            throw ConvergenceError(std::string("heteroclinic: ") +
                                   (saddle_side ? "backward" : "forward") +
                                   " branch did not reach its eps ball (" + term +
                                   "); raise xi_span_max or eps_saddle");
        }
        double reached = trace.event_xi;
        if (std::abs(reached) < half_span) {
            std::vector<EventSpec<2>> phase2;
            phase2.push_back({ball_id, ball, EventDirection::Rising, true});
            phase2.push_back({kEventLeftWall,
                              [Hs](double, const State2& s) { return s[0] - Hs; },
                              EventDirection::Falling, true});
            phase2.push_back({kEventRightWall,
                              [Hs](double, const State2& s) { return s[0] - 2.0 * Hs; },
                              EventDirection::Rising, true});
            IntegrateOptions eopts = iopts;
            std::size_t next = static_cast<std::size_t>(std::abs(reached) / ds) + 1;
            for (std::size_t i = next; i < max_side; ++i) {
                eopts.sample_at.push_back(dir * ds * static_cast<double>(i));
            }
            auto ext = integrate_adaptive<2>(field, {reached, trace.back_state()},
                                             dir * (half_span - std::abs(reached)), phase2,
                                             eopts);
            for (std::size_t i = 0; i < ext.size(); ++i) {
                if (dir * (ext.xi[i] - reached) <= 0.0) continue;
                trace.xi.push_back(ext.xi[i]);
                trace.states.push_back(ext.states[i]);
            }
            if (ext.termination == Termination::EventHit) {
                term += ext.event_id == ball_id ? "+ball_exit" : "+wall";
            } else {
                term += "+span";
            }
        }
        return std::pair{std::move(trace), term};
    };

    OrbitTrace<2> back, fwd;
    try {
        auto [b, b_term] = assemble_branch(dir_back, true);
        back = std::move(b);
        out.diagnostics.backward_termination = b_term;
        auto [f, f_term] = assemble_branch(dir_fwd, false);
        fwd = std::move(f);
        out.diagnostics.forward_termination = f_term;
    } catch (const ConvergenceError&) {
        // A steep transverse/approach rate ratio at the saddle can need the
        // section ordinate sharper than tol_bisect before the ball becomes
        // reachable; spend the remaining double resolution and retry once.
        double width_before = hi - lo;
        narrow(0.0);
        out.gamma_star = gamma_star;
        out.bracket_lo = lo;
        out.bracket_hi = hi;
        if (!(hi - lo < width_before)) throw;
        auto [b, b_term] = assemble_branch(dir_back, true);
        back = std::move(b);
        out.diagnostics.backward_termination = b_term;
        auto [f, f_term] = assemble_branch(dir_fwd, false);
        fwd = std::move(f);
        out.diagnostics.forward_termination = f_term;
    }

    Profile& p = out.profile;
    p.meta.model_spec = model.spec_string();
    p.meta.params = params;
    p.meta.anchor = "xi=0 at the section crossing (H_bar, gamma_star)";
    p.meta.tool_version = kToolVersion;
    p.meta.set_extra("gamma_bar", out.geometry.gamma_bar);
    p.meta.set_extra("H_bar", out.geometry.H_bar);
    p.meta.set_extra("mu", out.geometry.mu);
    p.meta.set_extra("gamma_star", out.gamma_star);
    p.meta.set_extra("bracket_lo", out.bracket_lo);
    p.meta.set_extra("bracket_hi", out.bracket_hi);
    p.meta.set_extra("eps_saddle", opts.eps_saddle);
    p.meta.set_extra("tol_bisect", opts.tol_bisect);

    const std::size_t nb = back.size();
    p.xi.reserve(nb + fwd.size());
    for (std::size_t i = nb; i-- > 0;) {
        p.xi.push_back(back.xi[i]);
        p.H.push_back(back.states[i][0]);
        p.Gamma.push_back(back.states[i][1]);
    }
    for (std::size_t i = 0; i < fwd.size(); ++i) {
        p.xi.push_back(fwd.xi[i]);
        p.H.push_back(fwd.states[i][0]);
        p.Gamma.push_back(fwd.states[i][1]);
    }
    // Drop duplicate and near-coincident rows (the traces share xi = 0, and
    // a branch-end event can land within a hair of a grid sample).
    for (std::size_t i = 1; i < p.xi.size();) {
        if (p.xi[i] - p.xi[i - 1] < 0.25 * ds) {
            p.xi.erase(p.xi.begin() + static_cast<std::ptrdiff_t>(i));
            p.H.erase(p.H.begin() + static_cast<std::ptrdiff_t>(i));
            p.Gamma.erase(p.Gamma.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    p.dH.resize(p.xi.size());
    p.dGamma.resize(p.xi.size());
    p.flags.assign(p.xi.size(), SampleFlag::Smooth);
    for (std::size_t i = 0; i < p.xi.size(); ++i) {
        auto [dH, dG] = vector_field(model, params, p.H[i], p.Gamma[i]);
        p.dH[i] = dH;
        p.dGamma[i] = dG;
    }
    for (std::size_t i = 1; i < p.Gamma.size(); ++i) {
        p.Gamma[i] = std::min(p.Gamma[i], p.Gamma[i - 1]);
    }

    out.diagnostics.backward_end_distance =
        std::abs(p.H.front() - 2.0 * Hs) + std::abs(1.0 - p.Gamma.front());
    out.diagnostics.forward_end_distance = std::abs(p.H.back() - Hs) + p.Gamma.back();
    p.meta.set_extra("endpoint_distance_left", out.diagnostics.backward_end_distance);
    p.meta.set_extra("endpoint_distance_right", out.diagnostics.forward_end_distance);

    p.validate();
    return out;
}

}  // namespace twfilm
