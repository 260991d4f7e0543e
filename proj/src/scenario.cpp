#include "edgerl/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "edgerl/errors.hpp"

namespace edgerl {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
  }
}

long long to_integer(const std::string& key, const std::string& value) {
  long long v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
  }
  return v;
}

std::vector<Point2> parse_points(const std::string& key, const std::string& value) {
  std::vector<Point2> points;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto comma = item.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("config key '" + key + "': expected 'x,y' pairs separated by ';'");
    }
    points.push_back({to_double(key, trim(item.substr(0, comma))),
                      to_double(key, trim(item.substr(comma + 1)))});
  }
  return points;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

bool parse_bool(const std::string& value) {
  if (value == "on" || value == "true" || value == "1" || value == "yes") return true;
  if (value == "off" || value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("expected on|off, got '" + value + "'");
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid scenario config: ") + what);
  };
  require(n_iov >= 1, "n_iov must be >= 1");
  require(n_mmbs >= 1, "n_mmbs must be >= 1");
  require(bandwidth_hz > 0.0, "bandwidth_hz must be > 0");
  require(noise_psd >= 0.0, "noise_psd must be >= 0");
  require(power_min > 0.0 && power_min <= power_max, "need 0 < power_min <= power_max");
  require(p_min >= 0.0 && p_min < p_max, "need 0 <= p_min < p_max");
  require(bits_per_pixel > 0.0, "bits_per_pixel must be > 0");
  require(map_side_m > 0.0, "map_side_m must be > 0");
  require(max_move_m >= 0.0, "max_move_m must be >= 0");
  require(weight_q > 0.0 && weight_b > 0.0 && weight_f > 0.0, "weights must be > 0");
  require(episode_len >= 1, "episode_len must be >= 1");
  require(path_loss_exponent >= 0.0, "path_loss_exponent must be >= 0");
  require(reference_gain > 0.0, "reference_gain must be > 0");
  require(static_cast<int>(mmbs_positions.size()) == n_mmbs,
          "mmbs_positions must have exactly n_mmbs entries");
  for (const auto& p : mmbs_positions) {
    require(p.x >= 0.0 && p.x <= map_side_m && p.y >= 0.0 && p.y <= map_side_m,
            "mmbs_positions must lie inside the map");
  }
}

void ScenarioConfig::place_mmbs_if_empty() {
  if (!mmbs_positions.empty()) return;
  if (n_mmbs == 3) {
    mmbs_positions = {{0.25 * map_side_m, 0.25 * map_side_m},
                      {0.75 * map_side_m, 0.25 * map_side_m},
                      {0.5 * map_side_m, 0.75 * map_side_m}};
    return;
  }
  // Separate stream from the environment's so placement does not shift
  // the mobility draws.
  std::mt19937_64 rng(seed ^ 0x6d6d6273ULL);
  std::uniform_real_distribution<double> coord(0.0, map_side_m);
  for (int v = 0; v < n_mmbs; ++v) {
    const double x = coord(rng);
    mmbs_positions.push_back({x, coord(rng)});
  }
}

bool ScenarioConfig::apply(const std::string& key, const std::string& value) {
  if (key == "n_iov") n_iov = static_cast<int>(to_integer(key, value));
  else if (key == "n_mmbs") n_mmbs = static_cast<int>(to_integer(key, value));
  else if (key == "bandwidth_hz") bandwidth_hz = to_double(key, value);
  else if (key == "noise_psd") noise_psd = to_double(key, value);
  else if (key == "noise_mode") {
    if (value == "psd") noise_mode = NoiseMode::kPowerSpectralDensity;
    else if (value == "total") noise_mode = NoiseMode::kTotalPower;
    else throw ConfigError("config key 'noise_mode': expected psd|total, got '" + value + "'");
  }
  else if (key == "power_min") power_min = to_double(key, value);
  else if (key == "power_max") power_max = to_double(key, value);
  else if (key == "p_min") p_min = to_double(key, value);
  else if (key == "p_max") p_max = to_double(key, value);
  else if (key == "bits_per_pixel") bits_per_pixel = to_double(key, value);
  else if (key == "map_side_m") map_side_m = to_double(key, value);
  else if (key == "max_move_m") max_move_m = to_double(key, value);
  else if (key == "weight_q") weight_q = to_double(key, value);
  else if (key == "weight_b") weight_b = to_double(key, value);
  else if (key == "weight_f") weight_f = to_double(key, value);
  else if (key == "episode_len") episode_len = static_cast<int>(to_integer(key, value));
  else if (key == "path_loss_exponent") path_loss_exponent = to_double(key, value);
  else if (key == "reference_gain") reference_gain = to_double(key, value);
  else if (key == "fading_enabled") {
    try {
      fading_enabled = parse_bool(value);
    } catch (const ConfigError&) {
      throw ConfigError("config key 'fading_enabled': expected on|off, got '" + value + "'");
    }
  }
  else if (key == "mmbs_positions") mmbs_positions = parse_points(key, value);
  else if (key == "seed") seed = static_cast<std::uint64_t>(to_integer(key, value));
  else return false;
  return true;
}

std::string ScenarioConfig::to_text() const {
  std::ostringstream os;
  os << "n_iov=" << n_iov << '\n'
     << "n_mmbs=" << n_mmbs << '\n'
     << "bandwidth_hz=" << format_double(bandwidth_hz) << '\n'
     << "noise_psd=" << format_double(noise_psd) << '\n'
     << "noise_mode=" << (noise_mode == NoiseMode::kPowerSpectralDensity ? "psd" : "total") << '\n'
     << "power_min=" << format_double(power_min) << '\n'
     << "power_max=" << format_double(power_max) << '\n'
     << "p_min=" << format_double(p_min) << '\n'
     << "p_max=" << format_double(p_max) << '\n'
     << "bits_per_pixel=" << format_double(bits_per_pixel) << '\n'
     << "map_side_m=" << format_double(map_side_m) << '\n'
     << "max_move_m=" << format_double(max_move_m) << '\n'
     << "weight_q=" << format_double(weight_q) << '\n'
     << "weight_b=" << format_double(weight_b) << '\n'
     << "weight_f=" << format_double(weight_f) << '\n'
     << "episode_len=" << episode_len << '\n'
     << "path_loss_exponent=" << format_double(path_loss_exponent) << '\n'
     << "reference_gain=" << format_double(reference_gain) << '\n'
     << "fading_enabled=" << (fading_enabled ? "on" : "off") << '\n';
  os << "mmbs_positions=";
  for (std::size_t v = 0; v < mmbs_positions.size(); ++v) {
    if (v) os << ';';
    os << format_double(mmbs_positions[v].x) << ',' << format_double(mmbs_positions[v].y);
  }
  os << '\n' << "seed=" << seed << '\n';
  return os.str();
}

std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return read_key_values(in);
}

ScenarioConfig parse_scenario_config(std::istream& in) {
  ScenarioConfig cfg;
  cfg.mmbs_positions.clear();
  for (const auto& [key, value] : read_key_values(in)) {
    if (!cfg.apply(key, value)) throw ConfigError("unknown config key '" + key + "'");
  }
  cfg.place_mmbs_if_empty();
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_scenario_config(in);
}

void save_scenario_config(const ScenarioConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file '" + path.string() + "'");
  out << cfg.to_text();
}

ScenarioName ScenarioName::parse(const std::string& name) {
  if (name.size() == 2 && name[0] == '3' && name[1] >= '3' && name[1] <= '7') {
    return ScenarioName{3, name[1] - '0'};
  }
  throw ConfigError("unknown scenario '" + name + "' (expected one of 33, 34, 35, 36, 37)");
}

std::string ScenarioName::str() const { return std::to_string(n_mmbs) + std::to_string(n_iov); }

ScenarioConfig ScenarioName::config(std::uint64_t seed) const {
  ScenarioConfig cfg;
  cfg.n_mmbs = n_mmbs;
  cfg.n_iov = n_iov;
  cfg.fading_enabled = true;
  cfg.seed = seed;
  cfg.place_mmbs_if_empty();
  return cfg;
}

}  // namespace edgerl
