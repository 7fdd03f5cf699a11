#pragma once

namespace fraceuler {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fraceuler
