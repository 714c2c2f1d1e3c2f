#pragma once

namespace randinv {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace randinv
