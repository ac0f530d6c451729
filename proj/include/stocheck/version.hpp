#pragma once

namespace stocheck {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace stocheck
