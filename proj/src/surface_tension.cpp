#include "twfilm/surface_tension.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

namespace twfilm {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(name) + " must be positive and finite");
    }
}

void check_gamma_halfopen(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw DomainError("gamma must lie in [0,1)");
    }
}

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

SurfaceTension::SurfaceTension(IsothermKind kind, double sigma0, double a, double b, double beta)
    : kind_(kind), sigma0_(sigma0), a_(a), b_(b), beta_(beta), theta_(0.0) {
    if (kind_ == IsothermKind::Sheludko) {
        theta_ = std::cbrt((beta_ + 1.0) / beta_) - 1.0;
    }
}

SurfaceTension SurfaceTension::linear(double sigma0) {
    require_positive(sigma0, "sigma0");
    return SurfaceTension(IsothermKind::Linear, sigma0, 0.0, 0.0, 0.0);
}

SurfaceTension SurfaceTension::sheludko(double sigma0, double beta) {
    require_positive(sigma0, "sigma0");
    require_positive(beta, "beta");
    return SurfaceTension(IsothermKind::Sheludko, sigma0, 0.0, 0.0, beta);
}

SurfaceTension SurfaceTension::szyszkowski(double sigma0, double a) {
    require_positive(sigma0, "sigma0");
    require_positive(a, "a");
    return SurfaceTension(IsothermKind::Szyszkowski, sigma0, a, 0.0, 0.0);
}

SurfaceTension SurfaceTension::frumkin(double sigma0, double a, double b) {
    require_positive(sigma0, "sigma0");
    require_positive(a, "a");
    if (!(b >= 0.0) || !std::isfinite(b)) {
        throw DomainError("b must be non-negative and finite");
    }
    // b < 2a keeps sigma' < 0 on [0,1) and rho Lipschitz.
    if (!(b < 2.0 * a)) {
        throw DomainError("frumkin requires b < 2a");
    }
    return SurfaceTension(IsothermKind::Frumkin, sigma0, a, b, 0.0);
}

SurfaceTension SurfaceTension::parse(const std::string& spec) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    if (parts.empty()) throw ParseError("empty model spec", 0);

    auto num = [&](size_t i) {
        const std::string& s = parts.at(i);
        try {
            size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ParseError("bad numeric field '" + s + "' in model spec '" + spec + "'", 0);
        }
    };
    const std::string& name = parts[0];
    try {
        if (name == "linear" && parts.size() == 2) return linear(num(1));
        if (name == "sheludko" && parts.size() == 3) return sheludko(num(1), num(2));
        if (name == "szyszkowski" && parts.size() == 3) return szyszkowski(num(1), num(2));
        if (name == "frumkin" && parts.size() == 4) return frumkin(num(1), num(2), num(3));
    } catch (const DomainError& e) {
        throw ParseError("invalid model spec '" + spec + "': " + e.what(), 0);
    }
    throw ParseError("unrecognized model spec '" + spec + "'", 0);
}

double SurfaceTension::sigma(double gamma) const {
    check_gamma_halfopen(gamma);
    switch (kind_) {
        case IsothermKind::Linear:
            return sigma0_ * (1.0 - gamma);
        case IsothermKind::Sheludko: {
            double r = (1.0 + theta_) / (1.0 + theta_ * gamma);
            return sigma0_ * beta_ * (r * r * r - 1.0);
        }
        case IsothermKind::Szyszkowski:
            return sigma0_ + a_ * std::log1p(-gamma);
        case IsothermKind::Frumkin:
            return sigma0_ + a_ * std::log1p(-gamma) + b_ * gamma * gamma;
    }
    throw Error("unreachable isotherm kind");
}

double SurfaceTension::sigma_prime(double gamma) const {
    check_gamma_halfopen(gamma);
    switch (kind_) {
        case IsothermKind::Linear:
            return -sigma0_;
        case IsothermKind::Sheludko: {
            double d = 1.0 + theta_ * gamma;
            double c = 1.0 + theta_;
            return -3.0 * sigma0_ * beta_ * theta_ * c * c * c / (d * d * d * d);
        }
        case IsothermKind::Szyszkowski:
            return -a_ / (1.0 - gamma);
        case IsothermKind::Frumkin:
            return -a_ / (1.0 - gamma) + 2.0 * b_ * gamma;
    }
    throw Error("unreachable isotherm kind");
}

double SurfaceTension::rho(double gamma) const {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw DomainError("gamma must lie in [0,1]");
    }
    if (gamma == 1.0) {
        if (!compliant()) {
            throw ComplianceError("rho(1) requires a singular isotherm (sigma' unbounded)");
        }
        return 0.0;
    }
    return -1.0 / sigma_prime(gamma);
}

double SurfaceTension::sigma_inverse(double s) const {
    if (!compliant()) {
        throw ComplianceError("sigma_inverse requires sigma to map [0,1) onto (-inf, sigma0]");
    }
    if (!(s <= sigma0_)) {
        throw DomainError("sigma_inverse: s must satisfy s <= sigma0");
    }
    if (s == sigma0_) return 0.0;
    if (kind_ == IsothermKind::Szyszkowski) {
        return -std::expm1((s - sigma0_) / a_);
    }
    // Frumkin: bracketed bisection on v = ln(1-gamma) (keeps conditioning
    // near the logarithmic singularity). sigma(1-e^v) is increasing in v.
    auto sig_of_v = [&](double v) {
        double g = -std::expm1(v);  // 1 - e^v
        return sigma0_ + a_ * v + b_ * g * g;
    };
    double hi = 0.0;  // gamma = 0, sigma = sigma0 >= s
    double lo = -1.0;
    while (!(sig_of_v(lo) < s)) {
        lo *= 2.0;
        if (lo < -750.0) break;  // gamma within 1 ulp of 1
    }
    for (int it = 0; it < 400; ++it) {
        double mid = 0.5 * (lo + hi);
        if (sig_of_v(mid) < s) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-12 * std::max(1.0, std::abs(lo))) break;
    }
    double v = 0.5 * (lo + hi);
    double gamma = -std::expm1(v);
    return std::clamp(gamma, 0.0, 1.0 - 1e-17);
}

double SurfaceTension::rho_sup() const {
    const int n = 10000;
    double best = 0.0;
    int best_i = 0;
    for (int i = 0; i <= n; ++i) {
        double g = static_cast<double>(i) / n;
        double r;
        if (g == 1.0) {
            r = compliant() ? 0.0 : -1.0 / sigma_prime(1.0 - 1e-14);
        } else {
            r = -1.0 / sigma_prime(g);
        }
        if (r > best) {
            best = r;
            best_i = i;
        }
    }
    // Golden-section polish around the best grid point.
    double lo = std::max(0.0, (best_i - 1.0) / n);
    double hi = std::min(1.0 - 1e-14, (best_i + 1.0) / n);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = -1.0 / sigma_prime(x1);
    double f2 = -1.0 / sigma_prime(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        if (f1 > f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = -1.0 / sigma_prime(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = -1.0 / sigma_prime(x2);
        }
    }
    return std::max(best, std::max(f1, f2));
}

ComplianceReport SurfaceTension::compliance() const {
    ComplianceReport rep;
    switch (kind_) {
        case IsothermKind::Linear:
            rep.satisfies_i3 = false;
            rep.satisfies_assumrho = true;
            rep.notes = "sigma' constant, integrable on (0,1)";
            break;
        case IsothermKind::Sheludko:
            rep.satisfies_i3 = false;
            rep.satisfies_assumrho = true;
            rep.notes = "sigma' bounded on [0,1], integrable";
            break;
        case IsothermKind::Szyszkowski:
            rep.satisfies_i3 = true;
            rep.satisfies_assumrho = true;
            rep.notes = "sigma' = -a/(1-gamma), non-integrable; rho = (1-gamma)/a";
            break;
        case IsothermKind::Frumkin:
            // b >= 2a is rejected at construction.
            rep.satisfies_i3 = true;
            rep.satisfies_assumrho = true;
            rep.notes = "b < 2a: sigma' < 0 with logarithmic singularity; rho Lipschitz";
            break;
    }
    // Sanity: sigma strictly decreasing on a 1e4-point grid.
    const int n = 10000;
    double prev = sigma(0.0);
    bool decreasing = true;
    for (int i = 1; i < n; ++i) {
        double g = static_cast<double>(i) / n;
        double v = sigma(g);
        if (!(v < prev)) {
            decreasing = false;
            break;
        }
        prev = v;
    }
    if (!decreasing) {
        rep.satisfies_i3 = false;
        rep.notes += "; grid sanity check found a non-decreasing step";
    }
    return rep;
}

bool SurfaceTension::compliant() const {
    return kind_ == IsothermKind::Szyszkowski || kind_ == IsothermKind::Frumkin;
}

std::string SurfaceTension::spec_string() const {
    switch (kind_) {
        case IsothermKind::Linear:
            return "linear:" + format_double(sigma0_);
        case IsothermKind::Sheludko:
            return "sheludko:" + format_double(sigma0_) + ":" + format_double(beta_);
        case IsothermKind::Szyszkowski:
            return "szyszkowski:" + format_double(sigma0_) + ":" + format_double(a_);
        case IsothermKind::Frumkin:
            return "frumkin:" + format_double(sigma0_) + ":" + format_double(a_) + ":" +
                   format_double(b_);
    }
    throw Error("unreachable isotherm kind");
}

}  // namespace twfilm
