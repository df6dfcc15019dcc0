#pragma once

#include <numbers>

namespace optodicke::constants {

inline constexpr double hbar = 1.054571817e-34; // J s
inline constexpr double c = 2.99792458e8;       // m / s
inline constexpr double pi = std::numbers::pi;

} // namespace optodicke::constants
