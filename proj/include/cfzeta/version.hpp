#pragma once

namespace cfzeta {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cfzeta
