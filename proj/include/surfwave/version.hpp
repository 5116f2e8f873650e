#pragma once

namespace surfwave {

inline constexpr const char* artifact_version = "1.0.0";
inline constexpr const char* config_schema = "surfwave-config/1";
inline constexpr const char* diagnostics_schema = "surfwave-diagnostics/1";

} // namespace surfwave
