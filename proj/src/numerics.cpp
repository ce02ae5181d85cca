#include "twfilm/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace twfilm {

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (!(lo < hi)) throw DomainError("bisect: requires lo < hi");
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw NoBracketError("bisect: f(lo) and f(hi) have the same sign");
    }
    for (int it = 0; it < 2000 && hi - lo > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at double resolution
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double quad_recurse(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson(fa, flm, fm, a, m);
    double right = simpson(fm, frm, fb, m, b);
    double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol && std::isfinite(delta)) {
        return left + right + delta / 15.0;
    }
    if (depth <= 0) {
        throw QuadDepthError("quad_adaptive: recursion depth exhausted (non-integrable singularity?)");
    }
    return quad_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           quad_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double quad_adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(a < b)) throw DomainError("quad_adaptive: requires a < b");
    if (!(tol > 0.0)) throw DomainError("quad_adaptive: tol must be positive");
    double nudge = 4.0 * std::numeric_limits<double>::epsilon() * (b - a);
    double aa = a, bb = b;
    double fa = f(aa);
    if (!std::isfinite(fa)) {
        aa = a + nudge;
        fa = f(aa);
        if (!std::isfinite(fa)) throw DomainError("quad_adaptive: f not finite near a");
    }
    double fb = f(bb);
    if (!std::isfinite(fb)) {
        bb = b - nudge;
        fb = f(bb);
        if (!std::isfinite(fb)) throw DomainError("quad_adaptive: f not finite near b");
    }
    double m = 0.5 * (aa + bb);
    double fm = f(m);
    if (!std::isfinite(fm)) throw DomainError("quad_adaptive: f not finite at midpoint");
    double whole = simpson(fa, fm, fb, aa, bb);
    return quad_recurse(f, aa, bb, fa, fm, fb, whole, tol, 60);
}

double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
    if (!(lo <= hi)) throw DomainError("golden_section_min: requires lo <= hi");
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 400 && hi - lo > tol; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return 0.5 * (lo + hi);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton from the Chebyshev-like initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw DomainError("MonotoneCubic: need >= 2 matching nodes");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(x_[i] > x_[i - 1])) throw DomainError("MonotoneCubic: nodes must increase");
    }
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_.assign(n, 0.0);
    if (n == 2) {
        d_[0] = d_[1] = delta[0];
    } else {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) {
                d_[i] = 0.0;
            } else {
                double w1 = 2.0 * h[i] + h[i - 1];
                double w2 = h[i] + 2.0 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        auto endpoint = [](double h0, double h1, double d0, double d1) {
            double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (d * d0 <= 0.0) {
                d = 0.0;
            } else if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) {
                d = 3.0 * d0;
            }
            return d;
        };
        d_[0] = endpoint(h[0], h[1], delta[0], delta[1]);
        d_[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }
}

std::size_t MonotoneCubic::find_interval(double x) const {
    if (x <= x_.front()) return 0;
    if (x >= x_.back()) return x_.size() - 2;
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double MonotoneCubic::eval(double x) const {
    std::size_t i = find_interval(x);
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    double h10 = t * (1.0 - t) * (1.0 - t);
    double h01 = t * t * (3.0 - 2.0 * t);
    double h11 = t * t * (t - 1.0);
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
}

double MonotoneCubic::deriv(double x) const {
    std::size_t i = find_interval(x);
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double g00 = 6.0 * t * (t - 1.0);
    double g10 = (1.0 - t) * (1.0 - 3.0 * t);
    double g01 = -g00;
    double g11 = t * (3.0 * t - 2.0);
    return (g00 * y_[i] / h + g10 * d_[i] + g01 * y_[i + 1] / h + g11 * d_[i + 1]);
}

std::vector<double> fd_weights(const std::vector<double>& nodes, double x0, int order) {
    const int n = static_cast<int>(nodes.size()) - 1;
    const int m = order;
    if (n < m) throw DomainError("fd_weights: need more nodes than the derivative order");
    // Fornberg (1988).
    std::vector<std::vector<double>> c(static_cast<std::size_t>(n) + 1,
                                       std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        int mn = std::min(i, m);
        double c2 = 1.0;
        double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) {
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) w[i] = c[i][static_cast<std::size_t>(m)];
    return w;
}

}  // namespace twfilm
