#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "edgerl/map_curve.hpp"
#include "edgerl/scenario.hpp"

namespace edgerl {

/// Allocation entry for an IoV excluded from the current uplink.
inline constexpr int kIdle = -1;

struct WorldState {
  int iteration = 0;  // steps taken in the current episode
  std::vector<Point2> iov_positions;
  std::vector<double> gains;  // N x M row-major, linear
  std::vector<double> powers;  // Watt, fixed per episode
  std::vector<double> last_data_bits;  // zeros before the first step
  std::vector<int> cum_idle;

  [[nodiscard]] double gain(int iov, int mmbs, int n_mmbs) const {
    return gains[static_cast<std::size_t>(iov) * n_mmbs + mmbs];
  }
};

/// Per-IoV MMBS index (or kIdle) plus per-IoV uplink resolution.
struct JointAction {
  std::vector<int> alloc;
  std::vector<double> resol;
};

struct StepOutcome {
  std::vector<double> per_iov_latency;  // seconds, 0 when idle
  std::vector<double> per_iov_map;  // 0..100, 0 when idle
  std::vector<double> per_iov_data_bits;  // 0 when idle
  std::vector<int> idle_flags;
  double reward_alloc = 0.0;
  double reward_resol = 0.0;
  std::vector<double> observation;  // observation of the successor state
};

// Link-budget primitives.

/// Bits in a square frame of side `p` pixels at `bits_per_pixel`.
double data_size(double p, double bits_per_pixel);

/// Log-distance path gain beta0 * d^-alpha with d floored at 1 m.
double path_gain(double distance_m, double reference_gain, double path_loss_exponent);
double channel_gain(Point2 iov, Point2 mmbs, const ScenarioConfig& cfg);

/// SINR of IoV `i` with intra-cell interference only. `gains` is N x M
/// row-major. `alloc[i]` must not be kIdle.
double sinr(int i, std::span<const int> alloc, std::span<const double> gains,
            std::span<const double> powers, int n_mmbs, double noise_power);

/// Shannon rate B log2(1 + sinr) in bit/s.
double rate(double sinr_value, double bandwidth_hz);

/// Transmission delay d / r. Throws UnreachableLinkError when d > 0 and r == 0.
double latency(double data_bits, double rate_bps);

/// Throws when `action` has the wrong width, an out-of-range MMBS index, or
/// a resolution outside [p_min, p_max].
void check_action(const JointAction& action, const ScenarioConfig& cfg);

/// Latencies, mAPs, idle flags and both agent rewards of `action` in `state`.
/// Leaves `observation` empty; does not advance the world.
StepOutcome evaluate_action(const WorldState& state, const JointAction& action,
                            const ScenarioConfig& cfg, const MapCurve& curve);

/// log10 of the N x M gains followed by the previous step's data sizes
/// normalized by bits_per_pixel * p_max^2. Length N*M + N.
std::vector<double> observe(const WorldState& state, const ScenarioConfig& cfg);

inline int observation_size(const ScenarioConfig& cfg) { return cfg.n_iov * cfg.n_mmbs + cfg.n_iov; }

/// Running totals over the steps of one episode.
struct EpisodeSummary {
  double objective = 0.0;  // sum of q*l - b*mAP + f*I
  double total_latency_s = 0.0;
  double mean_map = 0.0;  // over non-idle transmissions, 0 when none
  long long transmissions = 0;
  long long idle_count = 0;
  double mean_reward_alloc = 0.0;
  double mean_reward_resol = 0.0;
  int steps = 0;
};

class EpisodeAccumulator {
 public:
  explicit EpisodeAccumulator(const ScenarioConfig& cfg) : q_(cfg.weight_q), b_(cfg.weight_b), f_(cfg.weight_f) {}

  void add(const StepOutcome& outcome);
  [[nodiscard]] EpisodeSummary summary() const;
  [[nodiscard]] int steps() const { return steps_; }

 private:
  double q_, b_, f_;
  double objective_ = 0.0;
  double latency_ = 0.0;
  double map_sum_ = 0.0;
  long long transmissions_ = 0;
  long long idle_ = 0;
  double reward_alloc_ = 0.0;
  double reward_resol_ = 0.0;
  int steps_ = 0;
};

/// Episode objective and its decomposition. Requires a non-empty list.
EpisodeSummary episode_objective(std::span<const StepOutcome> outcomes, const ScenarioConfig& cfg);

/// Seeded IoV/MMBS uplink world.
///
/// Each episode draws IoV positions uniformly over the map and powers
/// uniformly in [power_min, power_max]. Every step moves each IoV by an
/// independent uniform displacement in [-max_move_m, max_move_m] per axis,
/// clipped to the map, then recomputes the channel gains (redrawing the
/// unit-mean exponential fading when enabled).
class UplinkEnv {
 public:
  explicit UplinkEnv(ScenarioConfig cfg, MapCurve curve = MapCurve());

  /// Starts a new episode and returns its initial state.
  const WorldState& reset();

  /// Applies `action`, advances the world and returns the outcome whose
  /// observation describes the new state.
  StepOutcome step(const JointAction& action);

  [[nodiscard]] std::vector<double> observe() const { return edgerl::observe(state_, cfg_); }
  [[nodiscard]] bool episode_done() const { return state_.iteration >= cfg_.episode_len; }

  [[nodiscard]] const WorldState& state() const { return state_; }
  /// Replaces the world state; gains and powers are taken as given.
  void set_state(WorldState state);

  [[nodiscard]] const ScenarioConfig& config() const { return cfg_; }
  [[nodiscard]] const MapCurve& curve() const { return curve_; }
  [[nodiscard]] int observation_size() const { return edgerl::observation_size(cfg_); }

 private:
  void refresh_gains();

  ScenarioConfig cfg_;
  MapCurve curve_;
  std::mt19937_64 rng_;
  WorldState state_;
};

}  // namespace edgerl
