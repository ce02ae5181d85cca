#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "twfilm/errors.hpp"

// Shared numerical kernels:
//   - embedded Dormand-Prince 4(5) integration with the free 4th-order
//     dense interpolant, PI step control, and event location by bisection
//     on the dense output,
//   - scalar bisection,
//   - adaptive Simpson quadrature with a recursion-depth cap,
//   - golden-section minimization,
//   - Gauss-Legendre nodes, monotone cubic (Fritsch-Carlson) interpolation,
//     and finite-difference weights on arbitrary nodes.

namespace twfilm {

enum class EventDirection { Any, Rising, Falling };

enum class Termination { EventHit, SpanExhausted, StepUnderflow, StateInvalid };

template <int N>
struct EventSpec {
    int id = 0;
    std::function<double(double, const std::array<double, N>&)> fn;
    EventDirection direction = EventDirection::Any;
    bool terminal = true;  // non-terminal events are logged, integration continues
};

template <int N>
struct EventRecord {
    int id = 0;
    double xi = 0.0;
    std::array<double, N> state{};
};

template <int N>
struct OrbitTrace {
    std::vector<double> xi;
    std::vector<std::array<double, N>> states;
    Termination termination = Termination::SpanExhausted;
    int event_id = -1;       // valid when termination == EventHit
    double event_xi = 0.0;   // valid when termination == EventHit
    bool forward = true;
    std::vector<EventRecord<N>> event_log;  // non-terminal hits, in order

    std::size_t size() const { return xi.size(); }
    const std::array<double, N>& back_state() const { return states.back(); }
};

struct IntegrateOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 0.0;  // 0 selects automatically
    double max_step = std::numeric_limits<double>::infinity();
    // When non-empty, states are recorded at these xi values (must be sorted
    // in the direction of integration) instead of at raw step endpoints.
    std::vector<double> sample_at;
    std::size_t max_steps = 40'000'000;
};

namespace detail {

template <int N>
using State = std::array<double, N>;

template <int N>
struct DenseSegment {
    double x0 = 0.0, h = 0.0;
    State<N> r1{}, r2{}, r3{}, r4{}, r5{};

    State<N> eval(double x) const {
        double theta = (x - x0) / h;
        double theta1 = 1.0 - theta;
        State<N> out;
        for (int i = 0; i < N; ++i) {
            out[i] = r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        }
        return out;
    }
};

template <int N>
bool finite_state(const State<N>& s) {
    for (double v : s) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

}  // namespace detail

/// Integrates state' = field(xi, state) from initial.first over a signed
/// span with adaptive Dormand-Prince 4(5). The trace ends at the first
/// triggered terminal event, at the span end, or on failure.
template <int N, class Field>
OrbitTrace<N> integrate_adaptive(Field&& field, std::pair<double, std::array<double, N>> initial,
                                 double span, const std::vector<EventSpec<N>>& events = {},
                                 const IntegrateOptions& opts = {}) {
    using detail::State;
    if (!(opts.rel_tol > 0.0 && opts.rel_tol <= 1e-2) ||
        !(opts.abs_tol > 0.0 && opts.abs_tol <= 1e-2)) {
        throw DomainError("integrate_adaptive: tolerances must lie in (0, 1e-2]");
    }
    if (span == 0.0) throw DomainError("integrate_adaptive: zero span");

    // Dormand-Prince coefficients.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    // Dense-output coefficients (Hairer/Norsett/Wanner dopri5).
    static constexpr double d1 = -12715105075.0 / 11282082432.0;
    static constexpr double d3 = 87487479700.0 / 32700410799.0;
    static constexpr double d4 = -10690763975.0 / 1880347072.0;
    static constexpr double d5 = 701980252875.0 / 199316789632.0;
    static constexpr double d6 = -1453857185.0 / 822651844.0;
    static constexpr double d7 = 69997945.0 / 29380423.0;

    const double dir = span > 0.0 ? 1.0 : -1.0;
    const double x_end = initial.first + span;

    OrbitTrace<N> trace;
    trace.forward = dir > 0.0;

    double x = initial.first;
    State<N> y = initial.second;
    if (!detail::finite_state<N>(y)) {
        throw DomainError("integrate_adaptive: non-finite initial state");
    }
    State<N> k1 = field(x, y);
    if (!detail::finite_state<N>(k1)) {
        trace.termination = Termination::StateInvalid;
        trace.xi.push_back(x);
        trace.states.push_back(y);
        return trace;
    }

    auto scale = [&](const State<N>& y0, const State<N>& y1, int i) {
        return opts.abs_tol + opts.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    };

    // Initial step selection.
    double h;
    if (opts.initial_step > 0.0) {
        h = opts.initial_step;
    } else {
        double d0 = 0.0, d1n = 0.0;
        for (int i = 0; i < N; ++i) {
            double sc = opts.abs_tol + opts.rel_tol * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1n += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1n = std::sqrt(d1n / N);
        h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h = std::min(h, 0.1 * std::abs(span));
        h = std::max(h, 1e-10);
    }
    h = std::min({h, opts.max_step, std::abs(span)});

    std::vector<double> ev_prev(events.size());
    for (std::size_t j = 0; j < events.size(); ++j) ev_prev[j] = events[j].fn(x, y);

    std::size_t next_sample = 0;
    auto record_initial = [&]() {
        if (!opts.sample_at.empty()) {
            while (next_sample < opts.sample_at.size() &&
                   dir * (opts.sample_at[next_sample] - x) <= 0.0) {
                trace.xi.push_back(opts.sample_at[next_sample]);
                trace.states.push_back(y);
                ++next_sample;
            }
        } else {
            trace.xi.push_back(x);
            trace.states.push_back(y);
        }
    };
    record_initial();

    double err_prev = 1.0;
    const double underflow_floor = 1e-14;

    for (std::size_t step = 0; step < opts.max_steps; ++step) {
        if (dir * (x_end - x) <= 0.0) {
            trace.termination = Termination::SpanExhausted;
            return trace;
        }
        if (std::abs(h) < underflow_floor * std::max(1.0, std::abs(x))) {
            trace.termination = Termination::StepUnderflow;
            return trace;
        }
        bool last = false;
        if (dir * (x + dir * h - x_end) >= 0.0) {
            h = std::abs(x_end - x);
            last = true;
        }
        const double hs = dir * h;

        State<N> k2, k3, k4, k5, k6, k7, y1, yt;
        auto stage = [&](double c, auto&&... terms) {
            for (int i = 0; i < N; ++i) {
                double acc = 0.0;
                ((acc += terms.first * terms.second[i]), ...);
                yt[i] = y[i] + hs * acc;
            }
            return field(x + c * hs, yt);
        };
        k2 = stage(c2, std::pair{a21, k1});
        k3 = stage(c3, std::pair{a31, k1}, std::pair{a32, k2});
        k4 = stage(c4, std::pair{a41, k1}, std::pair{a42, k2}, std::pair{a43, k3});
        k5 = stage(1.0 * c5, std::pair{a51, k1}, std::pair{a52, k2}, std::pair{a53, k3},
                   std::pair{a54, k4});
        k6 = stage(1.0, std::pair{a61, k1}, std::pair{a62, k2}, std::pair{a63, k3},
                   std::pair{a64, k4}, std::pair{a65, k5});
        for (int i = 0; i < N; ++i) {
            y1[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        }
        k7 = field(x + hs, y1);

        if (!detail::finite_state<N>(k2) || !detail::finite_state<N>(k3) ||
            !detail::finite_state<N>(k4) || !detail::finite_state<N>(k5) ||
            !detail::finite_state<N>(k6) || !detail::finite_state<N>(k7) ||
            !detail::finite_state<N>(y1)) {
            h *= 0.25;
            if (std::abs(h) < underflow_floor * std::max(1.0, std::abs(x))) {
                trace.termination = Termination::StateInvalid;
                return trace;
            }
            continue;
        }

        double err = 0.0;
        for (int i = 0; i < N; ++i) {
            double est = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                               e7 * k7[i]);
            double r = est / scale(y, y1, i);
            err += r * r;
        }
        err = std::sqrt(err / N);

        if (err > 1.0) {
            double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
            h *= fac;
            continue;
        }

        // Accepted. Build the dense segment for this step.
        detail::DenseSegment<N> seg;
        seg.x0 = x;
        seg.h = hs;
        for (int i = 0; i < N; ++i) {
            double ydiff = y1[i] - y[i];
            double bspl = hs * k1[i] - ydiff;
            seg.r1[i] = y[i];
            seg.r2[i] = ydiff;
            seg.r3[i] = bspl;
            seg.r4[i] = ydiff - hs * k7[i] - bspl;
            seg.r5[i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                              d7 * k7[i]);
        }
        const double x_new = x + hs;

        // Event scan over the accepted step.
        int hit_id = -1;
        double hit_xi = 0.0;
        bool hit_terminal = false;
        for (std::size_t j = 0; j < events.size(); ++j) {
            double g0 = ev_prev[j];
            double g1 = events[j].fn(x_new, y1);
            bool crossed = false;
            switch (events[j].direction) {
                case EventDirection::Rising:
                    crossed = g0 < 0.0 && g1 >= 0.0;
                    break;
                case EventDirection::Falling:
                    crossed = g0 > 0.0 && g1 <= 0.0;
                    break;
                case EventDirection::Any:
                    crossed = (g0 < 0.0 && g1 >= 0.0) || (g0 > 0.0 && g1 <= 0.0);
                    break;
            }
            ev_prev[j] = g1;
            if (!crossed) continue;
            // Bisection on the dense output for the crossing location.
            double lo = x, hi = x_new, glo = g0;
            const double xacc = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
            for (int it = 0; it < 200 && std::abs(hi - lo) > xacc; ++it) {
                double mid = 0.5 * (lo + hi);
                double gm = events[j].fn(mid, seg.eval(mid));
                if ((glo <= 0.0) == (gm <= 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            double xe = 0.5 * (lo + hi);
            if (!events[j].terminal) {
                trace.event_log.push_back({events[j].id, xe, seg.eval(xe)});
                continue;
            }
            if (hit_id < 0 || dir * (xe - hit_xi) < 0.0) {
                hit_id = events[j].id;
                hit_xi = xe;
                hit_terminal = true;
            }
        }

        auto emit_samples_until = [&](double limit, bool inclusive) {
            if (opts.sample_at.empty()) return;
            while (next_sample < opts.sample_at.size()) {
                double xs = opts.sample_at[next_sample];
                double past = dir * (xs - limit);
                if (inclusive ? past > 0.0 : past >= 0.0) break;
                if (dir * (xs - x) > 0.0) {
                    trace.xi.push_back(xs);
                    trace.states.push_back(seg.eval(xs));
                }
                ++next_sample;
            }
        };

        if (hit_terminal) {
            emit_samples_until(hit_xi, false);
            State<N> ye = seg.eval(hit_xi);
            trace.xi.push_back(hit_xi);
            trace.states.push_back(ye);
            trace.termination = Termination::EventHit;
            trace.event_id = hit_id;
            trace.event_xi = hit_xi;
            return trace;
        }

        emit_samples_until(x_new, true);
        if (opts.sample_at.empty()) {
            trace.xi.push_back(x_new);
            trace.states.push_back(y1);
        }

        x = x_new;
        y = y1;
        k1 = k7;  // FSAL

        if (last && dir * (x_end - x) <= 0.0) {
            trace.termination = Termination::SpanExhausted;
            return trace;
        }

        double fac = 0.9 * std::pow(err > 0.0 ? err : 1e-16, -0.14) * std::pow(err_prev, 0.08);
        fac = std::min(5.0, std::max(0.2, fac));
        h = std::min(h * fac, opts.max_step);
        err_prev = std::max(err, 1e-16);
    }
    trace.termination = Termination::SpanExhausted;
    return trace;
}

/// Bisection root finding: requires f(lo)*f(hi) <= 0. Returns the midpoint
/// of the final bracket of width <= tol.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol);

/// Adaptive Simpson quadrature of f over (a,b) to absolute tolerance tol,
/// recursion depth capped at 60. Non-finite endpoint values are nudged
/// inward by a few ulps; a persistent non-integrable singularity surfaces
/// as QuadDepthError.
double quad_adaptive(const std::function<double(double)>& f, double a, double b, double tol);

/// Golden-section minimization of f on [lo, hi]; returns the argmin.
double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-13);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Monotone cubic interpolation (Fritsch-Carlson). Preserves local
/// monotonicity of the data; C1 on [x.front(), x.back()].
class MonotoneCubic {
   public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double eval(double x) const;
    double deriv(double x) const;
    const std::vector<double>& nodes() const { return x_; }
    const std::vector<double>& values() const { return y_; }
    const std::vector<double>& slopes() const { return d_; }

   private:
    std::size_t find_interval(double x) const;
    std::vector<double> x_, y_, d_;
};

/// Finite-difference weights for the m-th derivative at x0 from the given
/// nodes (Fornberg's algorithm). weights.size() == nodes.size().
std::vector<double> fd_weights(const std::vector<double>& nodes, double x0, int order);

}  // namespace twfilm
