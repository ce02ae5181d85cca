#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "twfilm/errors.hpp"

namespace twfilm {

enum class Regime { G0_D0, G0_Dpos, Gpos_D0, Gpos_Dpos };

const char* regime_name(Regime r);
Regime regime_from_name(const std::string& name);

/// Wave parameters of the reduced traveling-frame system. The wave speed
/// is normalized to 1; H_star is the far-field film height.
struct RegimeParams {
    double G = 0.0;
    double D = 0.0;
    double H_star = 1.0;

    static constexpr double wave_speed = 1.0;

    void validate() const;
    Regime regime() const;
};

enum class SampleFlag : std::uint8_t { Smooth = 0, KinkLeft = 1, KinkRight = 2 };

const char* sample_flag_name(SampleFlag f);
SampleFlag sample_flag_from_name(const std::string& name);

struct ProfileMeta {
    std::string model_spec;
    RegimeParams params;
    std::string anchor;
    std::string tool_version;
    // Additional named values (gamma_bar, gamma_star, tolerances, ...),
    // serialized in the order given.
    std::vector<std::pair<std::string, double>> extras;

    void set_extra(const std::string& key, double value);
    const double* find_extra(const std::string& key) const;
};

/// Sampled traveling-wave profile. xi is strictly increasing except for
/// kink pairs: two consecutive rows may share xi when flagged
/// KinkLeft/KinkRight, storing one-sided values of a jump.
struct Profile {
    std::vector<double> xi;
    std::vector<double> H;
    std::vector<double> Gamma;
    std::vector<double> dH;
    std::vector<double> dGamma;
    std::vector<SampleFlag> flags;
    std::vector<double> kink_locations;
    ProfileMeta meta;

    std::size_t size() const { return xi.size(); }

    /// Throws InvariantError when a structural invariant fails.
    void validate() const;

    /// Index ranges [first, last] of maximal smooth pieces (split at kink
    /// pairs). A KinkLeft row ends a piece; the matching KinkRight row
    /// starts the next.
    std::vector<std::pair<std::size_t, std::size_t>> smooth_pieces() const;
};

}  // namespace twfilm
