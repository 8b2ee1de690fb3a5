#pragma once

#include <numbers>

namespace marsdrop {

/// Mars surface gravity [m/s^2], used altitude-independent by the rotorcraft and chute models.
inline constexpr double kMarsGravity = 3.71;

/// Mars gravitational parameter [m^3/s^2] and mean radius [m] for the entry phase.
inline constexpr double kMarsMu = 4.282837e13;
inline constexpr double kMarsRadius = 3389.5e3;

/// CO2 ratio of specific heats and specific gas constant [J/(kg K)].
inline constexpr double kCo2Gamma = 1.29;
inline constexpr double kCo2GasConstant = 188.92;

inline constexpr double kPi = std::numbers::pi;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }
inline constexpr double rpm2rads(double rpm) { return rpm * 2.0 * kPi / 60.0; }

}  // namespace marsdrop
