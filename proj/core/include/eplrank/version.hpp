#pragma once

namespace eplrank {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace eplrank
