#include "marsdrop/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "marsdrop/errors.hpp"

namespace marsdrop::cli {

namespace fs = std::filesystem;
using scenario::Json;

namespace {

constexpr std::array<Subcommand, 5> kSubcommands{Subcommand::entry, Subcommand::chute, Subcommand::deploy,
                                                 Subcommand::vrsmap, Subcommand::compare};

/// --help or --version: the text is printed and the exit code is 0.
struct HelpRequested {
  std::string text;
};

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << content;
  out.flush();
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
  }
}

std::string describe(Subcommand sub) {
  switch (sub) {
    case Subcommand::entry:
      return "ballistic entry to the end of the entry phase";
    case Subcommand::chute:
      return "entry and parachute descent to the release altitude";
    case Subcommand::deploy:
      return "helicopter release and capture to hover";
    case Subcommand::vrsmap:
      return "induced-velocity and regime map over the flow grid";
    case Subcommand::compare:
      return "entry and chute figures for all mission presets";
  }
  return {};
}

}  // namespace

std::string_view to_string(Subcommand sub) {
  switch (sub) {
    case Subcommand::entry:
      return "entry";
    case Subcommand::chute:
      return "chute";
    case Subcommand::deploy:
      return "deploy";
    case Subcommand::vrsmap:
      return "vrsmap";
    case Subcommand::compare:
      return "compare";
  }
  return "deploy";
}

RunRequest parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Mars mid-air helicopter deployment simulator", "marsdrop"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "marsdrop 0.1.0");

  std::string preset;
  std::string config;
  std::string out_dir;
  std::vector<std::string> overrides;
  for (auto sub : kSubcommands) {
    auto* s = app.add_subcommand(std::string(to_string(sub)), describe(sub));
    s->add_option("--preset", preset, "built-in scenario (mad, mad_full, pathfinder, insight)");
    s->add_option("--config", config, "scenario JSON file");
    s->add_option("--out", out_dir, "output directory (default $MARSDROP_OUT or ./out)");
    s->add_option("--set", overrides, "dotted-path override key=value, repeatable");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::CallForVersion& e) {
    throw HelpRequested{std::string(e.what()) + "\n"};
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string("command line: ") + e.what());
  }

  RunRequest req;
  for (auto sub : kSubcommands) {
    if (app.got_subcommand(std::string(to_string(sub)))) {
      req.subcommand = sub;
    }
  }
  if (!preset.empty() && !config.empty()) {
    throw ConfigError("--preset and --config are mutually exclusive");
  }
  if (!preset.empty()) {
    req.preset = preset;
  } else if (!config.empty()) {
    req.config_path = config;
  } else if (req.subcommand == Subcommand::vrsmap || req.subcommand == Subcommand::compare) {
    req.preset = "mad";
  } else {
    throw ConfigError("one of --preset or --config is required");
  }
  for (const auto& o : overrides) {
    if (o.find('=') == std::string::npos || o.front() == '=') {
      throw ConfigError("--set expects key=value, got '" + o + "'");
    }
  }
  req.overrides = overrides;
  if (!out_dir.empty()) {
    req.output_dir = out_dir;
  } else if (const char* env = std::getenv("MARSDROP_OUT"); env != nullptr && *env != '\0') {
    req.output_dir = env;
  } else {
    req.output_dir = "out";
  }
  return req;
}

Json resolve_document(const RunRequest& request) {
  Json doc = request.preset ? scenario::preset_document(*request.preset)
                            : scenario::load_document(*request.config_path);
  if (!doc.is_object()) {
    throw ConfigError("scenario document must be a JSON object");
  }
  auto& phases = doc["phases"];
  if (phases.is_null()) {
    phases = Json::object();
  }
  auto enable = [&phases](const char* key) {
    if (!phases.contains(key) || phases[key] == false) {
      phases[key] = true;
    }
  };
  switch (request.subcommand) {
    case Subcommand::entry:
      enable("entry");
      phases["chute"] = false;
      doc["release"]["enabled"] = false;
      break;
    case Subcommand::chute:
      enable("chute");
      if (!phases.contains("chute_start")) {
        enable("entry");
      }
      doc["release"]["enabled"] = false;
      break;
    case Subcommand::deploy:
      doc["release"]["enabled"] = true;
      break;
    case Subcommand::vrsmap:
    case Subcommand::compare:
      break;
  }
  for (const auto& o : request.overrides) {
    scenario::apply_override(doc, o);
  }
  return doc;
}

Json events_json(const TrajectoryLog& log) {
  Json events = Json::array();
  for (const auto& e : log.events()) {
    events.push_back({{"t_s", e.t_s}, {"name", e.name}});
  }
  return Json{{"events", events}};
}

Json summary_json(const sim::ScenarioResult& result, const sim::MissionConfig& cfg) {
  const bool empty = result.log.empty();
  Json s;
  s["scenario"] = cfg.name;
  s["status"] = empty ? "incomplete" : std::string(sim::to_string(result.status));
  s["message"] = empty && result.message.empty() ? "empty log" : result.message;
  s["terminal_velocity"] = optional_number(result.chute_terminal_velocity_ms);
  s["chute_speed_at_release_altitude"] =
      cfg.chute ? optional_number(result.release_speed_ms) : Json(nullptr);
  s["mach2_altitude"] = optional_number(result.mach2_altitude_m);
  s["release_altitude"] = result.release_time_s ? Json(cfg.release.altitude_m) : Json(nullptr);
  s["release_speed"] = result.release_time_s ? optional_number(result.release_speed_ms) : Json(nullptr);
  s["altitude_loss_to_hover"] = optional_number(result.altitude_loss_m);
  s["hover_elevation"] = optional_number(result.hover_altitude_m);
  s["hover_time"] = optional_number(result.hover_time_s);
  s["peak_severity"] = empty ? Json(nullptr) : Json(result.peak_severity);
  if (result.schedule) {
    const auto& sch = *result.schedule;
    Json entries = Json::array();
    for (const auto& e : sch.entries) {
      entries.push_back({{"trigger_speed_ratio", std::isfinite(e.trigger_speed_ratio) ? Json(e.trigger_speed_ratio)
                                                                                       : Json("inf")},
                         {"alpha_deg", rad2deg(e.alpha_rad)}});
    }
    s["guidance"] = {{"mode", cfg.guidance.mode == sim::GuidanceMode::planned ? "planned" : "fixed"},
                     {"margin", cfg.guidance.margin},
                     {"schedule", entries},
                     {"capture_speed_ratio", sch.capture_speed_ratio},
                     {"flagged", sch.flagged}};
    if (cfg.guidance.mode == sim::GuidanceMode::planned) {
      s["guidance"]["predicted_altitude_loss"] = sch.predicted_altitude_loss_m;
      s["guidance"]["alpha90_altitude_loss"] = sch.reference_altitude_loss_m;
      s["guidance"]["alpha90_crosses_vrs"] = sch.reference_crosses_vrs;
      s["guidance"]["predicted_peak_severity"] = sch.peak_severity;
    }
  }
  return s;
}

void emit_outputs(const sim::ScenarioResult& result, const sim::MissionConfig& cfg, const RunRequest& request) {
  ensure_dir(request.output_dir);
  std::ostringstream traj;
  write_trajectory_csv(traj, result.log);
  write_file(request.output_dir / "trajectory.csv", traj.str());
  const bool has_edl = std::any_of(result.log.rows().begin(), result.log.rows().end(), [](const LogRow& r) {
    return r.phase == Phase::entry || r.phase == Phase::chute;
  });
  if (has_edl) {
    std::ostringstream edl;
    write_edl_csv(edl, result.log);
    write_file(request.output_dir / "edl.csv", edl.str());
  }
  write_file(request.output_dir / "events.json", events_json(result.log).dump(2) + "\n");
  write_file(request.output_dir / "summary.json", summary_json(result, cfg).dump(2) + "\n");
}

void write_vrsmap_csv(std::ostream& out, const rotor_aero::RotorParams& params, double vx_max, double vz_min,
                      double vz_max, double step) {
  if (!(step > 0.0) || !(vx_max >= 0.0) || !(vz_max > vz_min)) {
    throw ConfigError("vrsmap: invalid grid");
  }
  out << "vx_bar,vz_bar_descent_positive,vi_over_vh,regime,severity\n";
  const auto nx = static_cast<long>(std::floor(vx_max / step + 1e-9));
  const auto nz = static_cast<long>(std::floor((vz_max - vz_min) / step + 1e-9));
  for (long i = 0; i <= nx; ++i) {
    const double vx = static_cast<double>(i) * step;
    for (long k = 0; k <= nz; ++k) {
      const double vz = vz_min + static_cast<double>(k) * step;
      const double vi = rotor_aero::induced_velocity(vx, -vz, 1.0, params);
      const auto cls = rotor_aero::vrs_classify(vx, vz, params);
      out << format_double(vx) << ',' << format_double(vz) << ',' << format_double(vi) << ','
          << rotor_aero::to_string(cls.regime) << ',' << format_double(cls.severity) << '\n';
    }
  }
}

std::vector<MissionComparison> compare_missions(const sim::MissionConfig& base) {
  std::vector<MissionComparison> rows;
  for (auto mission : {edl::Mission::pathfinder, edl::Mission::insight, edl::Mission::mad}) {
    MissionComparison row;
    row.mission = std::string(edl::to_string(mission));
    row.preset = edl::mission_preset(mission);
    sim::MissionConfig cfg = base;
    cfg.name = row.mission;
    cfg.entry = row.preset.entry;
    cfg.chute = row.preset.chute;
    cfg.release_enabled = false;
    const auto result = sim::run_scenario(cfg);
    row.mach2_altitude_m = result.mach2_altitude_m;
    row.simulated_speed_ms = result.release_speed_ms;
    row.terminal_velocity_ms =
        edl::chute_terminal_velocity(row.preset.chute, cfg.atmosphere.density(cfg.release.altitude_m));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_compare_csv(std::ostream& out, const std::vector<MissionComparison>& rows) {
  out << "quantity";
  for (const auto& r : rows) {
    out << ',' << r.mission;
  }
  out << '\n';
  const auto line = [&](const char* name, auto getter) {
    out << name;
    for (const auto& r : rows) {
      const std::optional<double> v = getter(r);
      out << ',' << (v ? format_double(*v) : std::string());
    }
    out << '\n';
  };
  using R = const MissionComparison&;
  line("entry_mass_kg", [](R r) { return std::optional(r.preset.entry.entry_mass_kg); });
  line("entry_velocity_ms", [](R r) { return std::optional(r.preset.entry.entry_velocity_ms); });
  line("flight_path_angle_deg", [](R r) { return std::optional(rad2deg(r.preset.entry.flight_path_angle_rad)); });
  line("heatshield_mass_kg", [](R r) { return std::optional(r.preset.heatshield_mass_kg); });
  line("backshell_chute_mass_kg", [](R r) { return std::optional(r.preset.backshell_chute_mass_kg); });
  line("landed_mass_kg", [](R r) { return std::optional(r.preset.landed_mass_kg); });
  line("entry_ballistic_coefficient_kgm2", [](R r) { return std::optional(r.preset.entry.ballistic_coefficient()); });
  line("chute_diameter_m", [](R r) { return std::optional(r.preset.chute.nominal_diameter_m); });
  line("chute_ballistic_coefficient_kgm2", [](R r) { return std::optional(r.preset.chute.ballistic_coefficient()); });
  line("mach2_altitude_m", [](R r) { return r.mach2_altitude_m; });
  line("terminal_velocity_ms", [](R r) { return std::optional(r.terminal_velocity_ms); });
  line("chute_speed_at_release_altitude_ms", [](R r) { return r.simulated_speed_ms; });
  line("reported_terminal_velocity_ms", [](R r) { return std::optional(r.preset.reported_terminal_velocity_ms); });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunRequest request;
  try {
    request = parse_args(args);
  } catch (const HelpRequested& h) {
    out << h.text;
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const Json doc = resolve_document(request);
    const fs::path base_dir = request.config_path ? request.config_path->parent_path() : fs::path();
    const auto cfg = scenario::to_mission(doc, base_dir);

    switch (request.subcommand) {
      case Subcommand::vrsmap: {
        ensure_dir(request.output_dir);
        std::ostringstream csv;
        write_vrsmap_csv(csv, cfg.vehicle.rotor);
        write_file(request.output_dir / "vrsmap.csv", csv.str());
        out << "wrote " << (request.output_dir / "vrsmap.csv").string() << '\n';
        return kExitOk;
      }
      case Subcommand::compare: {
        ensure_dir(request.output_dir);
        std::ostringstream csv;
        write_compare_csv(csv, compare_missions(cfg));
        write_file(request.output_dir / "compare.csv", csv.str());
        out << "wrote " << (request.output_dir / "compare.csv").string() << '\n';
        return kExitOk;
      }
      default:
        break;
    }

    sim::ScenarioResult result;
    try {
      result = sim::run_scenario(cfg);
    } catch (const SimulationError& e) {
      result.status = sim::RunStatus::incomplete;
      result.message = e.what();
    }
    emit_outputs(result, cfg, request);
    const auto summary = summary_json(result, cfg);
    out << "status: " << summary["status"].get<std::string>() << '\n';
    for (const char* key : {"mach2_altitude", "terminal_velocity", "altitude_loss_to_hover", "hover_elevation"}) {
      if (!summary[key].is_null()) {
        out << key << ": " << format_double(summary[key].get<double>()) << '\n';
      }
    }
    out << "outputs: " << request.output_dir.string() << '\n';
    if (summary["status"] != "complete") {
      err << "run incomplete: " << summary["message"].get<std::string>() << '\n';
      return kExitIncomplete;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace marsdrop::cli
