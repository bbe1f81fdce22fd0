#pragma once

namespace posdiv {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace posdiv
