#include "marsdrop/rotor_aero.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "marsdrop/errors.hpp"

namespace marsdrop::rotor_aero {

namespace {

// G(v) = v sqrt(vx^2 + (vz + v)^2) - vh^2, the momentum relation written so that it
// is increasing on each bracket used below. Roots are polished by safeguarded Newton.
double solve_momentum(double vx, double vz, double vh, double lo, double hi) {
  const double vh2 = vh * vh;
  const auto g = [&](double v) { return v * std::hypot(vx, vz + v) - vh2; };
  const auto dg = [&](double v) {
    const double s = std::hypot(vx, vz + v);
    return s > 0.0 ? s + v * (vz + v) / s : 0.0;
  };

  double v = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double gv = g(v);
    if (gv == 0.0) {
      return v;
    }
    if (gv < 0.0) {
      lo = v;
    } else {
      hi = v;
    }
    const double slope = dg(v);
    double next = slope > 0.0 ? v - gv / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - v) <= 1e-15 * std::max(vh, std::abs(v)) || hi - lo <= 4e-16 * hi) {
      return next;
    }
    v = next;
  }
  return v;
}

// Climb / hover branch, vz >= 0. Unique root on [0, vh].
double climb_branch(double vx, double vz, double vh) {
  if (vx == 0.0) {
    if (vz == 0.0) {
      return vh;
    }
    return vh * vh / (0.5 * vz + std::sqrt(0.25 * vz * vz + vh * vh));
  }
  return solve_momentum(vx, vz, vh, 0.0, vh);
}

// Windmill brake branch, vz <= -2 vh. Smallest positive root, unique on [0, -vz/2].
double windmill_branch(double vx, double vz, double vh) {
  if (vx == 0.0) {
    const double disc = std::max(vz * vz - 4.0 * vh * vh, 0.0);
    return 2.0 * vh * vh / (-vz + std::sqrt(disc));
  }
  return solve_momentum(vx, vz, vh, 0.0, -0.5 * vz);
}

// Helicopter branch continued into descent: the root with vz + v > 0.
double helicopter_branch(double vx, double vz, double vh) {
  if (vx == 0.0) {
    return -0.5 * vz + std::sqrt(0.25 * vz * vz + vh * vh);
  }
  const double lo = std::max(-vz, 0.0);
  return solve_momentum(vx, vz, vh, lo, lo + vh);
}

double bridge(double vx, double vz, double vh) {
  // z runs from 0 (hover) to 2 (windmill boundary).
  const double z = -vz / vh;
  const double p0 = climb_branch(vx, 0.0, vh);
  const double p1 = windmill_branch(vx, -kWindmillBoundary * vh, vh);
  // dv/dz at hover from implicit differentiation of the momentum relation.
  const double m0 = vh * p0 * p0 / (vx * vx + 2.0 * p0 * p0);
  // The windmill branch slope is unbounded at its vx = 0 turning point; the
  // bridge meets that end with zero slope.
  const double m1 = 0.0;
  const double t = z / kWindmillBoundary;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * p0 + h10 * kWindmillBoundary * m0 + h01 * p1 + h11 * kWindmillBoundary * m1;
}

double checked_vh(double vh) { return std::isfinite(vh) && vh > 0.0 ? vh : 0.0; }

}  // namespace

double RotorParams::disk_area() const { return kPi * radius_m * radius_m; }

double RotorParams::rotor_inertia() const {
  return 2.0 * blade_count * blade_mass_kg * radius_m * radius_m / 3.0;
}

void RotorParams::validate() const {
  const auto fail = [](const std::string& what) { throw ConfigError("rotor: " + what); };
  if (!(radius_m > 0.0)) fail("radius must be positive");
  if (!(solidity > 0.0 && solidity < 1.0)) fail("solidity must lie in (0, 1)");
  if (!(mean_profile_cd >= 0.0)) fail("mean profile drag must be non-negative");
  if (!(stall_ct_sigma > 0.0)) fail("stall C_T/sigma must be positive");
  if (!(stall_exponent > 0.0)) fail("stall exponent must be positive");
  if (!(induced_loss_factor >= 1.0)) fail("induced loss factor k must be >= 1");
  if (!(vrs_instability_factor >= 0.0 && vrs_instability_factor <= 1.0)) fail("VRS factor f must lie in [0, 1]");
  if (!(omega_max_rads > 0.0)) fail("omega_max must be positive");
  if (!(omega_nominal_rads > 0.0 && omega_nominal_rads <= omega_max_rads)) {
    fail("nominal rotor speed must lie in (0, omega_max]");
  }
  if (!(torque_max_Nm > 0.0)) fail("torque_max must be positive");
  if (!(ct_sigma_max > 0.0)) fail("ct_sigma_max must be positive");
  if (!(ct_sigma_design > 0.0 && ct_sigma_design <= ct_sigma_max)) fail("ct_sigma_design must lie in (0, ct_sigma_max]");
  if (blade_count < 1) fail("blade count must be positive");
  if (!(blade_mass_kg > 0.0)) fail("blade mass must be positive");
}

RotorFlowState make_flow_state(double vx_ms, double vz_ms, double omega_rads, double vi_ms,
                               const RotorParams& params) {
  RotorFlowState flow{vx_ms, vz_ms, omega_rads, vi_ms, 0.0, 0.0};
  const double tip = params.tip_speed(omega_rads);
  if (tip > 0.0) {
    flow.mu = std::abs(vx_ms) / tip;
    flow.lambda = (vz_ms + vi_ms) / tip;
  }
  return flow;
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::normal:
      return "normal";
    case Regime::vrs:
      return "vrs";
    case Regime::windmill:
      return "windmill";
  }
  return "normal";
}

double hover_induced_velocity(double thrust_N, double density_kgm3, double disk_area_m2) {
  if (thrust_N < 0.0) {
    throw ConfigError("hover_induced_velocity: negative thrust");
  }
  if (!(density_kgm3 > 0.0) || !(disk_area_m2 > 0.0)) {
    throw ConfigError("hover_induced_velocity: density and disk area must be positive");
  }
  return std::sqrt(thrust_N / (2.0 * density_kgm3 * disk_area_m2));
}

ThrustResult thrust(double ct_sigma, const RotorParams& params, double density_kgm3, double omega_rads) {
  ThrustResult out;
  out.ct_sigma = std::clamp(ct_sigma, 0.0, params.ct_sigma_max);
  out.saturated = out.ct_sigma != ct_sigma;
  const double tip = params.tip_speed(std::max(omega_rads, 0.0));
  out.thrust_N = out.ct_sigma * params.solidity * density_kgm3 * params.disk_area() * tip * tip;
  return out;
}

double vrs_excess_shape(double vx_bar, double vz_bar_descent) {
  if (!(vz_bar_descent > 0.0 && vz_bar_descent < kWindmillBoundary)) {
    return 0.0;
  }
  const double s = std::sin(0.5 * kPi * vz_bar_descent);
  return kVrsBumpAmplitude * s * s * std::max(0.0, 1.0 - std::abs(vx_bar));
}

double baseline_induced_velocity(double vx_ms, double vz_ms, double vh_ms) {
  const double vh = checked_vh(vh_ms);
  if (vh == 0.0) {
    return 0.0;
  }
  const double vx = std::abs(vx_ms);
  if (vz_ms >= 0.0) {
    return climb_branch(vx, vz_ms, vh);
  }
  if (vz_ms <= -kWindmillBoundary * vh) {
    return windmill_branch(vx, vz_ms, vh);
  }
  return std::max(bridge(vx, vz_ms, vh), 0.0);
}

double ideal_induced_velocity(double vx_ms, double vz_ms, double vh_ms, double instability_factor) {
  const double vh = checked_vh(vh_ms);
  if (vh == 0.0) {
    return 0.0;
  }
  const double base = baseline_induced_velocity(vx_ms, vz_ms, vh);
  if (vz_ms >= 0.0 || vz_ms <= -kWindmillBoundary * vh) {
    return base;
  }
  const double excess = instability_factor * vh * vrs_excess_shape(std::abs(vx_ms) / vh, -vz_ms / vh);
  return std::max(base + excess, 0.0);
}

double induced_velocity(double vx_ms, double vz_ms, double vh_ms, const RotorParams& params) {
  return params.induced_loss_factor * ideal_induced_velocity(vx_ms, vz_ms, vh_ms, params.vrs_instability_factor);
}

double momentum_induced_velocity(double vx_ms, double vz_ms, double vh_ms) {
  const double vh = checked_vh(vh_ms);
  if (vh == 0.0) {
    return 0.0;
  }
  const double vx = std::abs(vx_ms);
  if (vz_ms >= 0.0) {
    return climb_branch(vx, vz_ms, vh);
  }
  if (vz_ms <= -kWindmillBoundary * vh) {
    return windmill_branch(vx, vz_ms, vh);
  }
  return helicopter_branch(vx, vz_ms, vh);
}

double torque_coefficient(double ct_sigma, double mu, double lambda, const RotorParams& params) {
  const double ct = ct_sigma * params.solidity;
  const double thrust_term = 6.0 * ct_sigma;
  const double stall_term = std::pow(ct_sigma / params.stall_ct_sigma, params.stall_exponent);
  const double profile = params.mean_profile_cd * params.solidity / 8.0 *
                         (1.0 + thrust_term * thrust_term + stall_term) * (1.0 + 4.6 * mu * mu);
  return profile + ct * lambda;
}

double torque(double ct_sigma, const RotorFlowState& flow, const RotorParams& params, double density_kgm3) {
  if (!(flow.omega_rads > 0.0)) {
    return 0.0;
  }
  const double applied = std::clamp(ct_sigma, 0.0, params.ct_sigma_max);
  const double tip = params.tip_speed(flow.omega_rads);
  const double cq = torque_coefficient(applied, flow.mu, flow.lambda, params);
  return cq * density_kgm3 * params.disk_area() * params.radius_m * tip * tip;
}

VrsClassification vrs_classify(double vx_bar, double vz_bar_descent, const RotorParams& params) {
  if (vz_bar_descent >= kWindmillBoundary) {
    return {Regime::windmill, 0.0};
  }
  const double excess = params.vrs_instability_factor * vrs_excess_shape(vx_bar, vz_bar_descent);
  if (excess > kVrsThreshold) {
    return {Regime::vrs, std::clamp(excess / kVrsBumpAmplitude, 0.0, 1.0)};
  }
  return {Regime::normal, 0.0};
}

VrsClassification vrs_classify_inflated(double vx_bar, double vz_bar_descent, double margin,
                                        const RotorParams& params) {
  const double scale = 1.0 + std::max(margin, 0.0);
  return vrs_classify(std::abs(vx_bar) / scale, 1.0 + (vz_bar_descent - 1.0) / scale, params);
}

}  // namespace marsdrop::rotor_aero
