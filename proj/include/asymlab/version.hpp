#pragma once

namespace asymlab {

inline constexpr const char* kToolName = "asymlab";
inline constexpr const char* kVersion = "1.0.0";

} // namespace asymlab
