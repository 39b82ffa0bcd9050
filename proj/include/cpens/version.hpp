#pragma once

namespace cpens {

inline constexpr const char* kToolName = "cpens";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace cpens
