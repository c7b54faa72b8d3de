#pragma once

namespace lexdiv {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lexdiv
