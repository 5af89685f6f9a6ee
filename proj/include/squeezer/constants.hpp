#pragma once

#include <numbers>

namespace squeezer {

inline constexpr double kSpeedOfLight = 299'792'458.0;     // m/s
inline constexpr double kHbar = 1.054'571'817e-34;         // J s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double to_hz(double angular) { return angular / kTwoPi; }
inline constexpr double to_angular(double hz) { return hz * kTwoPi; }

}  // namespace squeezer
