#pragma once

namespace irgg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace irgg
