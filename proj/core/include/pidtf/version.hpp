#pragma once

namespace pidtf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pidtf
