#pragma once

#include <string_view>

#include "marsdrop/constants.hpp"

namespace marsdrop::rotor_aero {

/**
 * @brief Coaxial rotor parameters, modeled as one actuator disk of area pi R^2.
 *
 * `ct_sigma_*` values refer to the two-rotor system. Thrust and torque
 * returned by this module are two-rotor totals.
 */
struct RotorParams {
  double radius_m{0.605};
  double solidity{0.404};
  double mean_profile_cd{0.03};         ///< blade mean profile drag coefficient
  double stall_ct_sigma{0.20};          ///< C_T/sigma at which the stall term reaches 1
  double stall_exponent{20.0};
  double vrs_instability_factor{1.0};   ///< f: scales the VRS excess inflow, 0 suppresses it
  double induced_loss_factor{1.1};      ///< k: multiplies ideal induced velocity
  double omega_nominal_rads{301.8};     ///< design rotor speed
  double omega_max_rads{302.0};
  double torque_max_Nm{4.41};
  double collective_max_rad{deg2rad(21.0)};    ///< carried for reference; the disk model has no collective
  double ct_sigma_design{0.095};
  double ct_sigma_max{0.161};
  int blade_count{4};                   ///< per rotor
  double blade_mass_kg{0.070};

  [[nodiscard]] double disk_area() const;
  [[nodiscard]] double tip_speed(double omega_rads) const { return omega_rads * radius_m; }
  /// Polar inertia of both rotors, blades as uniform rods about the hub.
  [[nodiscard]] double rotor_inertia() const;
  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

/// Normalized VRS excess peak (fraction of v_h) when f = 1.
inline constexpr double kVrsBumpAmplitude = 0.3;
/// Excess inflow, as a fraction of v_h, above which a point counts as VRS.
inline constexpr double kVrsThreshold = 0.05;
/// Descent rate (in units of v_h) at and beyond which the windmill brake branch applies.
inline constexpr double kWindmillBoundary = 2.0;

/// Rotor-frame flow. `vz_ms` is climb-positive; `vi_ms` is positive down through the disk.
struct RotorFlowState {
  double vx_ms{};
  double vz_ms{};
  double omega_rads{};
  double vi_ms{};
  double mu{};
  double lambda{};
};

[[nodiscard]] RotorFlowState make_flow_state(double vx_ms, double vz_ms, double omega_rads, double vi_ms,
                                             const RotorParams& params);

struct ThrustResult {
  double thrust_N{};
  double ct_sigma{};      ///< value actually applied after clipping
  bool saturated{false};  ///< request was outside [0, ct_sigma_max]
};

enum class Regime { normal, vrs, windmill };

[[nodiscard]] std::string_view to_string(Regime regime);

struct VrsClassification {
  Regime regime{Regime::normal};
  double severity{0.0};  ///< in [0, 1]; 0 outside the VRS region
};

/// Ideal hover induced velocity sqrt(T / (2 rho A)). Throws ConfigError for negative thrust.
[[nodiscard]] double hover_induced_velocity(double thrust_N, double density_kgm3, double disk_area_m2);

/// Two-rotor thrust T = C_T rho A (Omega R)^2 with C_T/sigma clipped to [0, ct_sigma_max].
[[nodiscard]] ThrustResult thrust(double ct_sigma, const RotorParams& params, double density_kgm3,
                                  double omega_rads);

/**
 * Ideal induced velocity (no k factor).
 *
 * Momentum theory for climb (vz >= 0) and on the windmill brake branch
 * (vz <= -2 vh). Between the two a cubic Hermite bridge in vz/vh joins the
 * branch values, slope-matched at hover, plus the VRS excess
 * f * vrs_excess_shape(|vx|/vh, -vz/vh) * vh.
 */
[[nodiscard]] double ideal_induced_velocity(double vx_ms, double vz_ms, double vh_ms, double instability_factor);

/// k * ideal_induced_velocity. Always >= 0; zero when vh = 0.
[[nodiscard]] double induced_velocity(double vx_ms, double vz_ms, double vh_ms, const RotorParams& params);

/// The f = 0 bridge/momentum curve (no VRS excess), for diagnostics.
[[nodiscard]] double baseline_induced_velocity(double vx_ms, double vz_ms, double vh_ms);

/**
 * Pure momentum-theory reference curve.
 *
 * Climb branch for vz >= 0, windmill branch for vz <= -2 vh, and the
 * helicopter branch continued into descent in between (the curve a VRS
 * model departs from).
 */
[[nodiscard]] double momentum_induced_velocity(double vx_ms, double vz_ms, double vh_ms);

/// Unscaled excess shape A sin^2(pi z / 2) max(0, 1 - x), zero outside 0 < z < 2.
[[nodiscard]] double vrs_excess_shape(double vx_bar, double vz_bar_descent);

/// Torque coefficient C_Q for the given C_T/sigma (not clipped here), advance and inflow ratios.
[[nodiscard]] double torque_coefficient(double ct_sigma, double mu, double lambda, const RotorParams& params);

/// Two-rotor aerodynamic torque Q = C_Q rho A R (Omega R)^2; zero for a stopped rotor.
[[nodiscard]] double torque(double ct_sigma, const RotorFlowState& flow, const RotorParams& params,
                            double density_kgm3);

/// Regime at a normalized rotor-frame point; `vz_bar_descent` is descent-positive.
[[nodiscard]] VrsClassification vrs_classify(double vx_bar, double vz_bar_descent, const RotorParams& params);

/**
 * Classification against the VRS region dilated by (1 + margin) about its
 * center (vx_bar = 0, vz_bar = 1). margin = 0 is the plain region.
 */
[[nodiscard]] VrsClassification vrs_classify_inflated(double vx_bar, double vz_bar_descent, double margin,
                                                      const RotorParams& params);

}  // namespace marsdrop::rotor_aero
