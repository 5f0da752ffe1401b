#pragma once

namespace affdim {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace affdim
