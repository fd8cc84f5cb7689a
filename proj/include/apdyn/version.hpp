#pragma once

namespace apdyn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace apdyn
