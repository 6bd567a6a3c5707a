#pragma once

namespace accper {

inline constexpr const char* tool_version = "1.0.0";
inline constexpr int manifest_schema_version = 1;

}  // namespace accper
