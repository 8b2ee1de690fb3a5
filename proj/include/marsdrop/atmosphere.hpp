#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "marsdrop/constants.hpp"

namespace marsdrop::atmosphere {

/// One row of a tabulated profile. Altitudes are MOLA-referenced; wind is (east, north, up).
struct ProfileNode {
  double altitude_m{};
  double density_kgm3{};
  double temperature_K{};
  Eigen::Vector3d wind_ms{Eigen::Vector3d::Zero()};
};

/// Local atmospheric conditions at one altitude.
struct Ambient {
  double density_kgm3{};
  double temperature_K{};
  double sound_speed_ms{};
  Eigen::Vector3d wind_ms{Eigen::Vector3d::Zero()};
  /// Query fell outside the tabulated span and was continued from the end segment.
  bool extrapolated{false};
};

/// Isothermal exponential profile parameters.
struct ExponentialProfile {
  double surface_density_kgm3{};
  double scale_height_m{};
  double temperature_K{};
};

/**
 * @brief Altitude-indexed Mars atmosphere.
 *
 * Either an analytic isothermal exponential model or a tabulated profile with
 * piecewise-linear interpolation in altitude. Immutable after construction.
 */
class AtmosphereModel {
 public:
  /// Isothermal exponential profile with zero wind. Throws ConfigError on non-positive inputs.
  static AtmosphereModel builtin_exponential(double surface_density_kgm3, double scale_height_m,
                                             double temperature_K);

  /// Default Mars profile: 0.0158 kg/m^3 at 0 m MOLA, 11.1 km scale height, 210 K.
  static AtmosphereModel mars_default();

  /// Tabulated profile. Nodes are sorted by altitude; validation failures throw ConfigError.
  static AtmosphereModel from_nodes(std::vector<ProfileNode> nodes, double gas_gamma = kCo2Gamma,
                                    double gas_constant = kCo2GasConstant);

  [[nodiscard]] Ambient at(double altitude_m) const;
  [[nodiscard]] double density(double altitude_m) const { return at(altitude_m).density_kgm3; }

  [[nodiscard]] bool is_exponential() const {
    return std::holds_alternative<ExponentialProfile>(profile_);
  }
  /// Tabulated nodes; empty for the analytic exponential model.
  [[nodiscard]] std::span<const ProfileNode> nodes() const;
  [[nodiscard]] const ExponentialProfile* exponential() const {
    return std::get_if<ExponentialProfile>(&profile_);
  }

  /// Altitude span covered without extrapolation. Unbounded for the exponential model.
  [[nodiscard]] double min_altitude_m() const;
  [[nodiscard]] double max_altitude_m() const;
  [[nodiscard]] bool covers(double altitude_m) const {
    return altitude_m >= min_altitude_m() && altitude_m <= max_altitude_m();
  }

  [[nodiscard]] double gas_gamma() const { return gamma_; }
  [[nodiscard]] double gas_constant() const { return gas_constant_; }

  [[nodiscard]] double sound_speed(double temperature_K) const;

 private:
  AtmosphereModel(std::variant<ExponentialProfile, std::vector<ProfileNode>> profile, double gamma,
                  double gas_constant)
      : profile_(std::move(profile)), gamma_(gamma), gas_constant_(gas_constant) {}

  std::variant<ExponentialProfile, std::vector<ProfileNode>> profile_;
  double gamma_{kCo2Gamma};
  double gas_constant_{kCo2GasConstant};
};

/**
 * Parse a CSV profile.
 *
 * Header: `altitude_m,density_kgm3,temperature_K[,wind_east_ms,wind_north_ms,wind_up_ms]`.
 * Lines starting with `#` and blank lines are ignored. Throws ConfigError on
 * duplicate altitudes, non-numeric cells, missing columns, or fewer than two rows.
 */
AtmosphereModel load_profile(std::istream& in);
AtmosphereModel load_profile_file(const std::filesystem::path& path);

}  // namespace marsdrop::atmosphere
