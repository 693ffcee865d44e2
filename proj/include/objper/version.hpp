#pragma once

namespace objper {

inline constexpr const char* kToolName = "objper";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

}  // namespace objper
