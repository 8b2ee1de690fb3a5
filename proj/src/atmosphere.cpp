#include "marsdrop/atmosphere.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>

#include "marsdrop/errors.hpp"

namespace marsdrop::atmosphere {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string("atmosphere: ") + what + " must be positive and finite");
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return cells;
}

double parse_number(std::string_view cell, std::size_t line_no) {
  double value = 0.0;
  const auto* begin = cell.data();
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (cell.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ConfigError("atmosphere profile line " + std::to_string(line_no) +
                      ": non-numeric cell '" + std::string(cell) + "'");
  }
  return value;
}

}  // namespace

AtmosphereModel AtmosphereModel::builtin_exponential(double surface_density_kgm3, double scale_height_m,
                                                     double temperature_K) {
  require_positive(surface_density_kgm3, "surface density");
  require_positive(scale_height_m, "scale height");
  require_positive(temperature_K, "temperature");
  return AtmosphereModel(ExponentialProfile{surface_density_kgm3, scale_height_m, temperature_K}, kCo2Gamma,
                         kCo2GasConstant);
}

AtmosphereModel AtmosphereModel::mars_default() { return builtin_exponential(0.0158, 11100.0, 210.0); }

AtmosphereModel AtmosphereModel::from_nodes(std::vector<ProfileNode> nodes, double gas_gamma,
                                            double gas_constant) {
  if (nodes.size() < 2) {
    throw ConfigError("atmosphere: profile needs at least two nodes");
  }
  require_positive(gas_gamma, "gas gamma");
  require_positive(gas_constant, "gas constant");
  std::sort(nodes.begin(), nodes.end(),
            [](const ProfileNode& a, const ProfileNode& b) { return a.altitude_m < b.altitude_m; });
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (!std::isfinite(n.altitude_m) || !n.wind_ms.allFinite()) {
      throw ConfigError("atmosphere: non-finite profile node");
    }
    require_positive(n.density_kgm3, "density");
    require_positive(n.temperature_K, "temperature");
    if (i > 0 && !(n.altitude_m > nodes[i - 1].altitude_m)) {
      throw ConfigError("atmosphere: duplicate altitude " + std::to_string(n.altitude_m));
    }
  }
  return AtmosphereModel(std::move(nodes), gas_gamma, gas_constant);
}

std::span<const ProfileNode> AtmosphereModel::nodes() const {
  if (const auto* table = std::get_if<std::vector<ProfileNode>>(&profile_)) {
    return *table;
  }
  return {};
}

double AtmosphereModel::min_altitude_m() const {
  if (is_exponential()) {
    return -std::numeric_limits<double>::infinity();
  }
  return nodes().front().altitude_m;
}

double AtmosphereModel::max_altitude_m() const {
  if (is_exponential()) {
    return std::numeric_limits<double>::infinity();
  }
  return nodes().back().altitude_m;
}

double AtmosphereModel::sound_speed(double temperature_K) const {
  return std::sqrt(gamma_ * gas_constant_ * std::max(temperature_K, 0.0));
}

Ambient AtmosphereModel::at(double altitude_m) const {
  Ambient out;
  if (const auto* exp_profile = std::get_if<ExponentialProfile>(&profile_)) {
    out.density_kgm3 = exp_profile->surface_density_kgm3 * std::exp(-altitude_m / exp_profile->scale_height_m);
    out.temperature_K = exp_profile->temperature_K;
    out.sound_speed_ms = sound_speed(out.temperature_K);
    return out;
  }

  const auto table = nodes();
  // Segment index i such that table[i] <= h <= table[i+1]; end segments continue linearly.
  std::size_t i = 0;
  if (altitude_m >= table.back().altitude_m) {
    i = table.size() - 2;
  } else if (altitude_m > table.front().altitude_m) {
    const auto it = std::upper_bound(table.begin(), table.end(), altitude_m,
                                     [](double h, const ProfileNode& n) { return h < n.altitude_m; });
    i = static_cast<std::size_t>(std::distance(table.begin(), it)) - 1;
  }
  const auto& lo = table[i];
  const auto& hi = table[i + 1];
  out.extrapolated = altitude_m < table.front().altitude_m || altitude_m > table.back().altitude_m;

  if (altitude_m == lo.altitude_m) {
    out.density_kgm3 = lo.density_kgm3;
    out.temperature_K = lo.temperature_K;
    out.wind_ms = lo.wind_ms;
  } else if (altitude_m == hi.altitude_m) {
    out.density_kgm3 = hi.density_kgm3;
    out.temperature_K = hi.temperature_K;
    out.wind_ms = hi.wind_ms;
  } else {
    const double w = (altitude_m - lo.altitude_m) / (hi.altitude_m - lo.altitude_m);
    out.density_kgm3 = std::max(lo.density_kgm3 + w * (hi.density_kgm3 - lo.density_kgm3), 0.0);
    out.temperature_K = std::max(lo.temperature_K + w * (hi.temperature_K - lo.temperature_K), 0.0);
    out.wind_ms = lo.wind_ms + w * (hi.wind_ms - lo.wind_ms);
  }
  out.sound_speed_ms = sound_speed(out.temperature_K);
  return out;
}

AtmosphereModel load_profile(std::istream& in) {
  constexpr std::array<std::string_view, 6> kColumns = {"altitude_m",   "density_kgm3",  "temperature_K",
                                                        "wind_east_ms", "wind_north_ms", "wind_up_ms"};
  std::array<std::optional<std::size_t>, 6> column_of{};
  bool have_header = false;
  std::vector<ProfileNode> nodes;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) {
      line.remove_prefix(3);
    }
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto cells = split_csv(line);
    if (!have_header) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto it = std::find(kColumns.begin(), kColumns.end(), cells[c]);
        if (it == kColumns.end()) {
          throw ConfigError("atmosphere profile: unknown column '" + std::string(cells[c]) + "'");
        }
        column_of[static_cast<std::size_t>(std::distance(kColumns.begin(), it))] = c;
      }
      for (std::size_t k = 0; k < 3; ++k) {
        if (!column_of[k]) {
          throw ConfigError("atmosphere profile: missing required column '" + std::string(kColumns[k]) + "'");
        }
      }
      have_header = true;
      continue;
    }
    std::array<double, 6> values{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < kColumns.size(); ++k) {
      if (!column_of[k]) {
        continue;
      }
      if (*column_of[k] >= cells.size()) {
        throw ConfigError("atmosphere profile line " + std::to_string(line_no) + ": missing cell");
      }
      values[k] = parse_number(cells[*column_of[k]], line_no);
    }
    nodes.push_back(ProfileNode{values[0], values[1], values[2], Eigen::Vector3d(values[3], values[4], values[5])});
  }
  if (!have_header) {
    throw ConfigError("atmosphere profile: missing header");
  }
  return AtmosphereModel::from_nodes(std::move(nodes));
}

AtmosphereModel load_profile_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open atmosphere profile '" + path.string() + "'");
  }
  return load_profile(in);
}

}  // namespace marsdrop::atmosphere
