#pragma once

#include <numbers>

namespace qtr {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// CODATA 2018 (exact SI values for h and k_B).
inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J / K
inline constexpr double kHbarOverKb = kHbar / kBoltzmann;  // K s

inline constexpr double hz_to_angular(double hz) { return kTwoPi * hz; }
inline constexpr double angular_to_hz(double w) { return w / kTwoPi; }

}  // namespace qtr
