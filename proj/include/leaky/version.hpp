#pragma once

namespace leaky {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace leaky
