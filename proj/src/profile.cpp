#include "twfilm/profile.hpp"

#include <cmath>

namespace twfilm {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::G0_D0: return "G0_D0";
        case Regime::G0_Dpos: return "G0_Dpos";
        case Regime::Gpos_D0: return "Gpos_D0";
        case Regime::Gpos_Dpos: return "Gpos_Dpos";
    }
    throw Error("unreachable regime");
}

Regime regime_from_name(const std::string& name) {
    if (name == "G0_D0") return Regime::G0_D0;
    if (name == "G0_Dpos") return Regime::G0_Dpos;
    if (name == "Gpos_D0") return Regime::Gpos_D0;
    if (name == "Gpos_Dpos") return Regime::Gpos_Dpos;
    throw ParseError("unknown regime name '" + name + "'", 0);
}

void RegimeParams::validate() const {
    if (!(H_star > 0.0) || !std::isfinite(H_star)) throw DomainError("H_star must be positive");
    if (!(G >= 0.0) || !std::isfinite(G)) throw DomainError("G must be non-negative");
    if (!(D >= 0.0) || !std::isfinite(D)) throw DomainError("D must be non-negative");
}

Regime RegimeParams::regime() const {
    if (G > 0.0) return D > 0.0 ? Regime::Gpos_Dpos : Regime::Gpos_D0;
    return D > 0.0 ? Regime::G0_Dpos : Regime::G0_D0;
}

const char* sample_flag_name(SampleFlag f) {
    switch (f) {
        case SampleFlag::Smooth: return "smooth";
        case SampleFlag::KinkLeft: return "kink_left";
        case SampleFlag::KinkRight: return "kink_right";
    }
    throw Error("unreachable sample flag");
}

SampleFlag sample_flag_from_name(const std::string& name) {
    if (name == "smooth") return SampleFlag::Smooth;
    if (name == "kink_left") return SampleFlag::KinkLeft;
    if (name == "kink_right") return SampleFlag::KinkRight;
    throw ParseError("unknown sample flag '" + name + "'", 0);
}

void ProfileMeta::set_extra(const std::string& key, double value) {
    for (auto& kv : extras) {
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    }
    extras.emplace_back(key, value);
}

const double* ProfileMeta::find_extra(const std::string& key) const {
    for (const auto& kv : extras) {
        if (kv.first == key) return &kv.second;
    }
    return nullptr;
}

void Profile::validate() const {
    const std::size_t n = size();
    if (H.size() != n || Gamma.size() != n || dH.size() != n || dGamma.size() != n ||
        flags.size() != n) {
        throw InvariantError("profile: column lengths differ");
    }
    if (n == 0) throw InvariantError("profile: empty");
    // Gamma may wiggle at roundoff scale from root polishing; anything
    // larger is a genuine monotonicity violation.
    const double mono_slack = 1e-9;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(xi[i]) || !std::isfinite(H[i]) || !std::isfinite(Gamma[i]) ||
            !std::isfinite(dH[i]) || !std::isfinite(dGamma[i])) {
            throw InvariantError("profile: non-finite entry at row " + std::to_string(i));
        }
        if (!(H[i] > 0.0)) throw InvariantError("profile: H must be positive (row " +
                                                std::to_string(i) + ")");
        if (!(Gamma[i] >= 0.0 && Gamma[i] < 1.0)) {
            throw InvariantError("profile: Gamma must lie in [0,1) (row " + std::to_string(i) +
                                 ")");
        }
        if (i > 0) {
            if (xi[i] < xi[i - 1]) {
                throw InvariantError("profile: xi must be non-decreasing (row " +
                                     std::to_string(i) + ")");
            }
            if (xi[i] == xi[i - 1]) {
                bool kink_pair = flags[i - 1] == SampleFlag::KinkLeft &&
                                 flags[i] == SampleFlag::KinkRight;
                if (!kink_pair) {
                    throw InvariantError(
                        "profile: duplicate xi allowed only as a kink_left/kink_right pair "
                        "(row " + std::to_string(i) + ")");
                }
            }
            if (Gamma[i] > Gamma[i - 1] + mono_slack) {
                throw InvariantError("profile: Gamma must be non-increasing (row " +
                                     std::to_string(i) + ")");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (flags[i] == SampleFlag::KinkLeft) {
            if (i + 1 >= n || flags[i + 1] != SampleFlag::KinkRight || xi[i + 1] != xi[i]) {
                throw InvariantError("profile: kink_left without matching kink_right at xi");
            }
        }
        if (flags[i] == SampleFlag::KinkRight) {
            if (i == 0 || flags[i - 1] != SampleFlag::KinkLeft) {
                throw InvariantError("profile: kink_right without preceding kink_left");
            }
        }
    }
}

std::vector<std::pair<std::size_t, std::size_t>> Profile::smooth_pieces() const {
    std::vector<std::pair<std::size_t, std::size_t>> pieces;
    std::size_t start = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        if (flags[i] == SampleFlag::KinkLeft) {
            pieces.emplace_back(start, i);
            start = i + 1;  // the KinkRight row
        }
    }
    if (start < size()) pieces.emplace_back(start, size() - 1);
    return pieces;
}

}  // namespace twfilm
