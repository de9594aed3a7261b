#pragma once

namespace ctfa {

inline constexpr const char* kToolName = "ctfa";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ctfa
