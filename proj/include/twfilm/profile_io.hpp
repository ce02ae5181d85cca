#pragma once

#include <string>

#include "twfilm/profile.hpp"

namespace twfilm {

// Profile serialization. The CSV body carries the samples under the header
//   xi,H,Gamma,dH,dGamma,flag
// with flag in {smooth, kink_left, kink_right}; numbers use shortest
// round-trip decimal formatting and LF line endings. A text sidecar with
// "key: value" lines carries the model spec, parameters, regime, anchor,
// tool version and any named extras; it shares the CSV basename with
// extension ".meta".

/// Sidecar path for a profile CSV path (extension swapped for ".meta").
std::string meta_sidecar_path(const std::string& csv_path);

/// Shortest round-trip decimal rendering of a double.
std::string format_shortest(double v);

/// Writes the CSV and its metadata sidecar. meta_path empty selects the
/// derived sidecar path.
void write_profile(const Profile& profile, const std::string& path,
                   const std::string& meta_path = "");

/// Reads and validates a profile; all invariants are enforced on load.
/// The sidecar is read when present (meta_path empty selects the derived
/// path); a missing sidecar leaves the metadata empty.
Profile read_profile(const std::string& path, const std::string& meta_path = "");

}  // namespace twfilm
