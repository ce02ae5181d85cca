#pragma once

namespace twfilm {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace twfilm
