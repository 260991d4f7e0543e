#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace edgerl {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// How `noise_psd` enters the SINR denominator.
enum class NoiseMode {
  kPowerSpectralDensity,  // noise power = bandwidth_hz * noise_psd
  kTotalPower,            // noise power = noise_psd
};

/// Physical and reward parameterization of one IoV/MMBS uplink world.
///
/// Defaults follow the experimental configuration: B = 10 MHz, noise
/// -100 dBm read as a per-Hz density, powers in [1.5, 2.0] W, resolutions in
/// [64, 416], a 1000 m square map with 100 m per-axis moves per iteration and
/// reward weights q = 60, b = 50, f = 75.
struct ScenarioConfig {
  int n_iov = 3;
  int n_mmbs = 3;
  double bandwidth_hz = 10e6;
  double noise_psd = 1e-13;
  NoiseMode noise_mode = NoiseMode::kPowerSpectralDensity;
  double power_min = 1.5;
  double power_max = 2.0;
  double p_min = 64.0;
  double p_max = 416.0;
  double bits_per_pixel = 24.0;
  double map_side_m = 1000.0;
  double max_move_m = 100.0;
  double weight_q = 60.0;
  double weight_b = 50.0;
  double weight_f = 75.0;
  int episode_len = 100;
  double path_loss_exponent = 3.0;
  double reference_gain = 1e-3;
  bool fading_enabled = false;
  std::vector<Point2> mmbs_positions;
  std::uint64_t seed = 0;

  /// Noise power in Watt seen by every receiver.
  [[nodiscard]] double noise_power() const {
    return noise_mode == NoiseMode::kPowerSpectralDensity ? bandwidth_hz * noise_psd : noise_psd;
  }

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  /// Fills `mmbs_positions` when empty: the fixed three-station layout for
  /// M = 3, seeded uniform placement otherwise.
  void place_mmbs_if_empty();

  /// Applies one `key=value` setting. Returns false for an unknown key;
  /// throws ConfigError for a malformed value.
  bool apply(const std::string& key, const std::string& value);

  /// Flat key=value text form, one setting per line.
  [[nodiscard]] std::string to_text() const;
};

/// Key/value pairs of a flat config file in file order. Blank lines and lines
/// starting with '#' are skipped.
std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in);
std::vector<std::pair<std::string, std::string>> read_key_values(const std::filesystem::path& path);

/// Parses a ScenarioConfig from key=value text; every key must be known.
ScenarioConfig parse_scenario_config(std::istream& in);
ScenarioConfig load_scenario_config(const std::filesystem::path& path);
void save_scenario_config(const ScenarioConfig& cfg, const std::filesystem::path& path);

/// Congestion setting name "<M><N>", e.g. "34" is 3 MMBSs and 4 IoVs.
struct ScenarioName {
  int n_mmbs = 3;
  int n_iov = 3;

  /// Accepts the five congestion settings "33" through "37".
  static ScenarioName parse(const std::string& name);
  [[nodiscard]] std::string str() const;

  /// Experiment defaults for this setting (fading on).
  [[nodiscard]] ScenarioConfig config(std::uint64_t seed) const;
};

bool parse_bool(const std::string& value);

}  // namespace edgerl
