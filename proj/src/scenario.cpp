#include "marsdrop/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "marsdrop/errors.hpp"

namespace marsdrop::scenario {

namespace {

namespace fs = std::filesystem;

void check_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) {
    throw ConfigError(where + ": expected an object");
  }
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

void read(const Json& j, const char* key, const std::string& where, double& out) {
  if (!j.contains(key)) {
    return;
  }
  const auto& v = j.at(key);
  if (!v.is_number()) {
    throw ConfigError(where + "." + key + ": expected a number");
  }
  out = v.get<double>();
}

void read(const Json& j, const char* key, const std::string& where, bool& out) {
  if (!j.contains(key)) {
    return;
  }
  const auto& v = j.at(key);
  if (!v.is_boolean()) {
    throw ConfigError(where + "." + key + ": expected true or false");
  }
  out = v.get<bool>();
}

void read(const Json& j, const char* key, const std::string& where, std::string& out) {
  if (!j.contains(key)) {
    return;
  }
  const auto& v = j.at(key);
  if (!v.is_string()) {
    throw ConfigError(where + "." + key + ": expected a string");
  }
  out = v.get<std::string>();
}

void read_int(const Json& j, const char* key, const std::string& where, int& out) {
  if (!j.contains(key)) {
    return;
  }
  const auto& v = j.at(key);
  if (!v.is_number_integer()) {
    throw ConfigError(where + "." + key + ": expected an integer");
  }
  out = v.get<int>();
}

void read_deg(const Json& j, const char* key, const std::string& where, double& out_rad) {
  if (j.contains(key)) {
    double deg = 0.0;
    read(j, key, where, deg);
    out_rad = deg2rad(deg);
  }
}

void read_gain(const Json& j, const char* key, std::optional<double>& out) {
  if (j.contains(key)) {
    double v = 0.0;
    read(j, key, "control", v);
    out = v;
  }
}

rotor_aero::RotorParams rotor_from_json(const Json& j, rotor_aero::RotorParams r) {
  const std::string w = "vehicle.rotor";
  check_keys(j, w,
             {"radius_m", "solidity", "mean_profile_cd", "stall_ct_sigma", "stall_exponent", "vrs_instability_factor",
              "f", "induced_loss_factor", "k", "omega_nominal_rads", "rotor_speed_rpm", "omega_max_rads",
              "torque_max_Nm", "collective_max_deg", "ct_sigma_design", "ct_sigma_max", "blade_count",
              "blade_mass_kg"});
  if (j.contains("f") && j.contains("vrs_instability_factor")) {
    throw ConfigError(w + ": give either 'f' or 'vrs_instability_factor'");
  }
  if (j.contains("k") && j.contains("induced_loss_factor")) {
    throw ConfigError(w + ": give either 'k' or 'induced_loss_factor'");
  }
  if (j.contains("rotor_speed_rpm") && j.contains("omega_nominal_rads")) {
    throw ConfigError(w + ": give either 'rotor_speed_rpm' or 'omega_nominal_rads'");
  }
  read(j, "radius_m", w, r.radius_m);
  read(j, "solidity", w, r.solidity);
  read(j, "mean_profile_cd", w, r.mean_profile_cd);
  read(j, "stall_ct_sigma", w, r.stall_ct_sigma);
  read(j, "stall_exponent", w, r.stall_exponent);
  read(j, "vrs_instability_factor", w, r.vrs_instability_factor);
  read(j, "f", w, r.vrs_instability_factor);
  read(j, "induced_loss_factor", w, r.induced_loss_factor);
  read(j, "k", w, r.induced_loss_factor);
  read(j, "omega_nominal_rads", w, r.omega_nominal_rads);
  if (j.contains("rotor_speed_rpm")) {
    double rpm = 0.0;
    read(j, "rotor_speed_rpm", w, rpm);
    r.omega_nominal_rads = rpm2rads(rpm);
  }
  read(j, "omega_max_rads", w, r.omega_max_rads);
  read(j, "torque_max_Nm", w, r.torque_max_Nm);
  read_deg(j, "collective_max_deg", w, r.collective_max_rad);
  read(j, "ct_sigma_design", w, r.ct_sigma_design);
  read(j, "ct_sigma_max", w, r.ct_sigma_max);
  read_int(j, "blade_count", w, r.blade_count);
  read(j, "blade_mass_kg", w, r.blade_mass_kg);
  return r;
}

edl::EntryConfig entry_from_json(const Json& j, edl::EntryConfig e) {
  const std::string w = "phases.entry";
  check_keys(j, w,
             {"entry_mass_kg", "entry_velocity_ms", "flight_path_angle_deg", "aeroshell_diameter_m", "hypersonic_cd",
              "entry_altitude_m"});
  read(j, "entry_mass_kg", w, e.entry_mass_kg);
  read(j, "entry_velocity_ms", w, e.entry_velocity_ms);
  read_deg(j, "flight_path_angle_deg", w, e.flight_path_angle_rad);
  read(j, "aeroshell_diameter_m", w, e.aeroshell_diameter_m);
  read(j, "hypersonic_cd", w, e.hypersonic_cd);
  read(j, "entry_altitude_m", w, e.entry_altitude_m);
  return e;
}

edl::ChuteConfig chute_from_json(const Json& j, edl::ChuteConfig c) {
  const std::string w = "phases.chute";
  check_keys(j, w,
             {"nominal_diameter_m", "drag_coefficient", "suspended_mass_kg", "deploy_mach_max",
              "deploy_altitude_min_m"});
  read(j, "nominal_diameter_m", w, c.nominal_diameter_m);
  read(j, "drag_coefficient", w, c.drag_coefficient);
  read(j, "suspended_mass_kg", w, c.suspended_mass_kg);
  read(j, "deploy_mach_max", w, c.deploy_mach_max);
  read(j, "deploy_altitude_min_m", w, c.deploy_altitude_min_m);
  return c;
}

/// Phase given as a bool or as an object of overrides (which enables it).
template <class Config, class Parse>
std::optional<Config> optional_phase(const Json& phases, const char* key, const Config& base, Parse parse) {
  if (!phases.contains(key)) {
    return std::nullopt;
  }
  const auto& v = phases.at(key);
  if (v.is_boolean()) {
    return v.get<bool>() ? std::optional<Config>(base) : std::nullopt;
  }
  if (v.is_object()) {
    return parse(v, base);
  }
  throw ConfigError(std::string("phases.") + key + ": expected true, false or an object");
}

Json release_only_document() {
  return Json{
      {"name", "mad"},
      {"vehicle", {{"preset", "mad"}}},
      {"atmosphere", {{"preset", "mars_default"}}},
      {"phases", {{"mission", "mad"}, {"entry", false}, {"chute", false}}},
      {"release", {{"enabled", true}, {"altitude_m", 6000.0}, {"initial_speed_ms", 30.0}, {"initial_alpha_deg", 90.0}}},
      {"guidance", {{"mode", "fixed"}, {"margin", 0.0}}},
  };
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"mad", "mad_full", "pathfinder", "insight"};
}

Json preset_document(std::string_view name) {
  Json doc = release_only_document();
  if (name == "mad") {
    return doc;
  }
  if (name == "mad_full") {
    doc["name"] = "mad_full";
    doc["phases"] = {{"mission", "mad"}, {"entry", true}, {"chute", true}, {"spin_up_time_s", 5.0}};
    return doc;
  }
  if (name == "pathfinder" || name == "insight") {
    doc["name"] = std::string(name);
    doc["phases"] = {{"mission", std::string(name)}, {"entry", true}, {"chute", true}};
    doc["release"]["enabled"] = false;
    return doc;
  }
  throw ConfigError("unknown scenario preset '" + std::string(name) + "'");
}

Json load_document(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open scenario file " + path.string());
  }
  try {
    return Json::parse(in, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw ConfigError("scenario file " + path.string() + ": " + e.what());
  }
}

void apply_override(Json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  }
  std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  if (key.rfind("rotor.", 0) == 0) {
    key = "vehicle." + key;
  }
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;
  }

  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) {
      throw ConfigError("override key '" + key + "' has an empty segment");
    }
    if (!node->is_object()) {
      if (node->is_null() || node->is_boolean()) {
        *node = Json::object();  // e.g. phases.entry=true refined by phases.entry.entry_mass_kg
      } else {
        throw ConfigError("override key '" + key + "' descends into a non-object");
      }
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

vehicle::VehicleConfig vehicle_from_json(const Json& j) {
  const std::string w = "vehicle";
  check_keys(j, w, {"preset", "name", "gross_mass_kg", "fuselage_cd", "base_side_m", "inertia_kgm2", "rotor"});
  std::string preset = "mad";
  read(j, "preset", w, preset);
  auto v = vehicle::preset(preset);
  read(j, "name", w, v.name);
  read(j, "gross_mass_kg", w, v.gross_mass_kg);
  read(j, "fuselage_cd", w, v.fuselage_cd);
  read(j, "base_side_m", w, v.base_side_m);
  v.inertia = vehicle::cube_inertia(v.gross_mass_kg, v.base_side_m);
  if (j.contains("inertia_kgm2")) {
    const auto& m = j.at("inertia_kgm2");
    if (m.is_array() && m.size() == 3 && m[0].is_number()) {
      v.inertia = Eigen::Vector3d(m[0].get<double>(), m[1].get<double>(), m[2].get<double>()).asDiagonal();
    } else if (m.is_array() && m.size() == 3) {
      for (int r = 0; r < 3; ++r) {
        if (!m[r].is_array() || m[r].size() != 3) {
          throw ConfigError("vehicle.inertia_kgm2: expected 3 diagonal values or a 3x3 matrix");
        }
        for (int c = 0; c < 3; ++c) {
          v.inertia(r, c) = m[r][c].get<double>();
        }
      }
    } else {
      throw ConfigError("vehicle.inertia_kgm2: expected 3 diagonal values or a 3x3 matrix");
    }
  }
  if (j.contains("rotor")) {
    v.rotor = rotor_from_json(j.at("rotor"), v.rotor);
  }
  v.validate();
  v.rotor.validate();
  return v;
}

atmosphere::AtmosphereModel atmosphere_from_json(const Json& j, const fs::path& base_dir) {
  check_keys(j, "atmosphere", {"preset", "exponential", "csv"});
  const int sources = static_cast<int>(j.contains("preset")) + static_cast<int>(j.contains("exponential")) +
                      static_cast<int>(j.contains("csv"));
  if (sources > 1) {
    throw ConfigError("atmosphere: give one of 'preset', 'exponential', 'csv'");
  }
  if (j.contains("exponential")) {
    const auto& e = j.at("exponential");
    check_keys(e, "atmosphere.exponential", {"surface_density_kgm3", "scale_height_m", "temperature_K"});
    auto p = *atmosphere::AtmosphereModel::mars_default().exponential();
    read(e, "surface_density_kgm3", "atmosphere.exponential", p.surface_density_kgm3);
    read(e, "scale_height_m", "atmosphere.exponential", p.scale_height_m);
    read(e, "temperature_K", "atmosphere.exponential", p.temperature_K);
    return atmosphere::AtmosphereModel::builtin_exponential(p.surface_density_kgm3, p.scale_height_m,
                                                            p.temperature_K);
  }
  if (j.contains("csv")) {
    std::string file;
    read(j, "csv", "atmosphere", file);
    fs::path path(file);
    if (path.is_relative() && !base_dir.empty()) {
      path = base_dir / path;
    }
    return atmosphere::load_profile_file(path);
  }
  std::string preset = "mars_default";
  read(j, "preset", "atmosphere", preset);
  if (preset != "mars_default") {
    throw ConfigError("atmosphere: unknown preset '" + preset + "'");
  }
  return atmosphere::AtmosphereModel::mars_default();
}

sim::MissionConfig to_mission(const Json& doc, const fs::path& base_dir) {
  check_keys(doc, "scenario",
             {"name", "vehicle", "atmosphere", "phases", "release", "control", "guidance", "integrator", "output"});
  sim::MissionConfig cfg;
  read(doc, "name", "scenario", cfg.name);
  cfg.vehicle = vehicle_from_json(doc.value("vehicle", Json::object()));
  cfg.atmosphere = atmosphere_from_json(doc.value("atmosphere", Json::object()), base_dir);

  const Json phases = doc.value("phases", Json::object());
  check_keys(phases, "phases", {"mission", "entry", "chute", "spin_up_time_s", "chute_start"});
  std::string mission = "mad";
  read(phases, "mission", "phases", mission);
  const auto preset = edl::mission_preset(mission);
  cfg.entry = optional_phase(phases, "entry", preset.entry, entry_from_json);
  cfg.chute = optional_phase(phases, "chute", preset.chute, chute_from_json);
  read(phases, "spin_up_time_s", "phases", cfg.spin_up_time_s);
  if (phases.contains("chute_start")) {
    const auto& cs = phases.at("chute_start");
    check_keys(cs, "phases.chute_start", {"altitude_m", "speed_ms"});
    read(cs, "altitude_m", "phases.chute_start", cfg.chute_start.altitude_m);
    read(cs, "speed_ms", "phases.chute_start", cfg.chute_start.speed_ms);
  }

  const Json release = doc.value("release", Json::object());
  check_keys(release, "release", {"enabled", "altitude_m", "initial_alpha_deg", "initial_speed_ms"});
  read(release, "enabled", "release", cfg.release_enabled);
  read(release, "altitude_m", "release", cfg.release.altitude_m);
  read_deg(release, "initial_alpha_deg", "release", cfg.release.initial_alpha_rad);
  read(release, "initial_speed_ms", "release", cfg.release.initial_speed_ms);

  const Json control = doc.value("control", Json::object());
  check_keys(control, "control", {"pi_kp", "pi_ki", "pd_kp", "pd_kd"});
  read_gain(control, "pi_kp", cfg.control.pi_kp);
  read_gain(control, "pi_ki", cfg.control.pi_ki);
  read_gain(control, "pd_kp", cfg.control.pd_kp);
  read_gain(control, "pd_kd", cfg.control.pd_kd);

  const Json guidance = doc.value("guidance", Json::object());
  check_keys(guidance, "guidance", {"mode", "margin", "capture_gain_per_s", "capture_speed_ratio"});
  std::string mode = "fixed";
  read(guidance, "mode", "guidance", mode);
  if (mode == "fixed") {
    cfg.guidance.mode = sim::GuidanceMode::fixed;
  } else if (mode == "planned") {
    cfg.guidance.mode = sim::GuidanceMode::planned;
  } else {
    throw ConfigError("guidance.mode: expected 'fixed' or 'planned', got '" + mode + "'");
  }
  read(guidance, "margin", "guidance", cfg.guidance.margin);
  read(guidance, "capture_gain_per_s", "guidance", cfg.guidance.capture_gain_per_s);
  read(guidance, "capture_speed_ratio", "guidance", cfg.guidance.planner.capture_speed_ratio);

  const Json integ = doc.value("integrator", Json::object());
  const std::string wi = "integrator";
  check_keys(integ, wi,
             {"dt_entry_s", "dt_chute_s", "dt_release_s", "t_max_s", "hover_speed_ms", "hover_hold_s",
              "post_hover_s"});
  read(integ, "dt_entry_s", wi, cfg.integrator.dt_entry_s);
  read(integ, "dt_chute_s", wi, cfg.integrator.dt_chute_s);
  read(integ, "dt_release_s", wi, cfg.integrator.dt_release_s);
  read(integ, "t_max_s", wi, cfg.integrator.t_max_s);
  read(integ, "hover_speed_ms", wi, cfg.integrator.hover_speed_ms);
  read(integ, "hover_hold_s", wi, cfg.integrator.hover_hold_s);
  read(integ, "post_hover_s", wi, cfg.integrator.post_hover_s);

  if (doc.contains("output")) {
    check_keys(doc.at("output"), "output", {"dir"});
  }
  cfg.validate();
  return cfg;
}

}  // namespace marsdrop::scenario
