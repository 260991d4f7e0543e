#include "edgerl/uplink_env.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "edgerl/errors.hpp"

namespace edgerl {

double data_size(double p, double bits_per_pixel) { return bits_per_pixel * p * p; }

double path_gain(double distance_m, double reference_gain, double path_loss_exponent) {
  return reference_gain * std::pow(std::max(distance_m, 1.0), -path_loss_exponent);
}

double channel_gain(Point2 iov, Point2 mmbs, const ScenarioConfig& cfg) {
  return path_gain(std::hypot(iov.x - mmbs.x, iov.y - mmbs.y), cfg.reference_gain,
                   cfg.path_loss_exponent);
}

double sinr(int i, std::span<const int> alloc, std::span<const double> gains,
            std::span<const double> powers, int n_mmbs, double noise_power) {
  const int cell = alloc[i];
  if (cell == kIdle) throw std::logic_error("sinr queried for an idle IoV");
  double interference = 0.0;
  for (std::size_t n = 0; n < alloc.size(); ++n) {
    if (static_cast<int>(n) == i || alloc[n] != cell) continue;
    interference += gains[n * n_mmbs + cell] * powers[n];
  }
  const double signal = gains[static_cast<std::size_t>(i) * n_mmbs + cell] * powers[i];
  return signal / (interference + noise_power);
}

double rate(double sinr_value, double bandwidth_hz) { return bandwidth_hz * std::log2(1.0 + sinr_value); }

double latency(double data_bits, double rate_bps) {
  if (data_bits == 0.0) return 0.0;
  if (!(rate_bps > 0.0)) {
    throw UnreachableLinkError("allocated link has zero rate but " + std::to_string(data_bits) +
                               " bits to send");
  }
  return data_bits / rate_bps;
}

void check_action(const JointAction& action, const ScenarioConfig& cfg) {
  const auto n = static_cast<std::size_t>(cfg.n_iov);
  if (action.alloc.size() != n || action.resol.size() != n) {
    throw DimensionError("joint action must have one allocation and one resolution per IoV");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int c = action.alloc[i];
    if (c != kIdle && (c < 0 || c >= cfg.n_mmbs)) {
      throw DomainError("IoV " + std::to_string(i) + " allocated to unknown MMBS " + std::to_string(c));
    }
    const double p = action.resol[i];
    if (!(p >= cfg.p_min && p <= cfg.p_max)) {
      std::ostringstream os;
      os << "IoV " << i << " resolution " << p << " outside [" << cfg.p_min << ", " << cfg.p_max << "]";
      throw DomainError(os.str());
    }
  }
}

StepOutcome evaluate_action(const WorldState& state, const JointAction& action,
                            const ScenarioConfig& cfg, const MapCurve& curve) {
  check_action(action, cfg);
  const int n = cfg.n_iov;
  const double noise = cfg.noise_power();
  StepOutcome out;
  out.per_iov_latency.assign(n, 0.0);
  out.per_iov_map.assign(n, 0.0);
  out.per_iov_data_bits.assign(n, 0.0);
  out.idle_flags.assign(n, 0);

  double alloc_cost = 0.0;
  double resol_cost = 0.0;
  for (int i = 0; i < n; ++i) {
    if (action.alloc[i] == kIdle) {
      out.idle_flags[i] = 1;
      alloc_cost += cfg.weight_f;
      continue;
    }
    const double d = data_size(action.resol[i], cfg.bits_per_pixel);
    const double gamma = sinr(i, action.alloc, state.gains, state.powers, cfg.n_mmbs, noise);
    const double l = latency(d, rate(gamma, cfg.bandwidth_hz));
    const double m = curve.score(action.resol[i]);
    out.per_iov_data_bits[i] = d;
    out.per_iov_latency[i] = l;
    out.per_iov_map[i] = m;
    alloc_cost += cfg.weight_q * l;
    resol_cost += cfg.weight_q * l - cfg.weight_b * m;
  }
  out.reward_alloc = -alloc_cost / n;
  out.reward_resol = -resol_cost / n;
  return out;
}

std::vector<double> observe(const WorldState& state, const ScenarioConfig& cfg) {
  std::vector<double> obs;
  obs.reserve(observation_size(cfg));
  for (double g : state.gains) obs.push_back(std::log10(g));
  const double full_frame = data_size(cfg.p_max, cfg.bits_per_pixel);
  for (double d : state.last_data_bits) obs.push_back(d / full_frame);
  return obs;
}

void EpisodeAccumulator::add(const StepOutcome& outcome) {
  for (std::size_t i = 0; i < outcome.idle_flags.size(); ++i) {
    const double l = outcome.per_iov_latency[i];
    const double m = outcome.per_iov_map[i];
    const int idle = outcome.idle_flags[i];
    objective_ += q_ * l - b_ * m + f_ * idle;
    latency_ += l;
    if (idle) {
      ++idle_;
    } else {
      map_sum_ += m;
      ++transmissions_;
    }
  }
  reward_alloc_ += outcome.reward_alloc;
  reward_resol_ += outcome.reward_resol;
  ++steps_;
}

EpisodeSummary EpisodeAccumulator::summary() const {
  EpisodeSummary s;
  s.objective = objective_;
  s.total_latency_s = latency_;
  s.transmissions = transmissions_;
  s.mean_map = transmissions_ > 0 ? map_sum_ / static_cast<double>(transmissions_) : 0.0;
  s.idle_count = idle_;
  s.steps = steps_;
  if (steps_ > 0) {
    s.mean_reward_alloc = reward_alloc_ / steps_;
    s.mean_reward_resol = reward_resol_ / steps_;
  }
  return s;
}

EpisodeSummary episode_objective(std::span<const StepOutcome> outcomes, const ScenarioConfig& cfg) {
  if (outcomes.empty()) throw std::invalid_argument("episode_objective needs at least one step");
  EpisodeAccumulator acc(cfg);
  for (const auto& o : outcomes) acc.add(o);
  return acc.summary();
}

UplinkEnv::UplinkEnv(ScenarioConfig cfg, MapCurve curve)
    : cfg_(std::move(cfg)), curve_(curve), rng_(cfg_.seed) {
  cfg_.place_mmbs_if_empty();
  cfg_.validate();
  reset();
}

const WorldState& UplinkEnv::reset() {
  const auto n = static_cast<std::size_t>(cfg_.n_iov);
  std::uniform_real_distribution<double> coord(0.0, cfg_.map_side_m);
  std::uniform_real_distribution<double> power(cfg_.power_min, cfg_.power_max);
  state_ = WorldState{};
  state_.iov_positions.resize(n);
  for (auto& p : state_.iov_positions) {
    p.x = coord(rng_);
    p.y = coord(rng_);
  }
  state_.powers.resize(n);
  for (auto& h : state_.powers) h = cfg_.power_min == cfg_.power_max ? cfg_.power_min : power(rng_);
  state_.last_data_bits.assign(n, 0.0);
  state_.cum_idle.assign(n, 0);
  refresh_gains();
  return state_;
}

void UplinkEnv::refresh_gains() {
  const int n = cfg_.n_iov;
  const int m = cfg_.n_mmbs;
  state_.gains.resize(static_cast<std::size_t>(n) * m);
  std::exponential_distribution<double> fading(1.0);
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < m; ++v) {
      double g = channel_gain(state_.iov_positions[i], cfg_.mmbs_positions[v], cfg_);
      if (cfg_.fading_enabled) {
        // Keep the gain strictly positive for the log-feature.
        g *= std::max(fading(rng_), 1e-12);
      }
      state_.gains[static_cast<std::size_t>(i) * m + v] = g;
    }
  }
}

StepOutcome UplinkEnv::step(const JointAction& action) {
  if (episode_done()) throw std::logic_error("step called after the episode ended; call reset()");
  StepOutcome out = evaluate_action(state_, action, cfg_, curve_);

  std::uniform_real_distribution<double> move(-cfg_.max_move_m, cfg_.max_move_m);
  for (auto& p : state_.iov_positions) {
    const double dx = move(rng_);
    const double dy = move(rng_);
    p.x = std::clamp(p.x + dx, 0.0, cfg_.map_side_m);
    p.y = std::clamp(p.y + dy, 0.0, cfg_.map_side_m);
  }
  refresh_gains();
  state_.last_data_bits = out.per_iov_data_bits;
  for (std::size_t i = 0; i < out.idle_flags.size(); ++i) state_.cum_idle[i] += out.idle_flags[i];
  ++state_.iteration;
  out.observation = observe();
  return out;
}

void UplinkEnv::set_state(WorldState state) {
  const auto n = static_cast<std::size_t>(cfg_.n_iov);
  if (state.iov_positions.size() != n || state.powers.size() != n || state.last_data_bits.size() != n ||
      state.cum_idle.size() != n || state.gains.size() != n * static_cast<std::size_t>(cfg_.n_mmbs)) {
    throw DimensionError("world state does not match the scenario dimensions");
  }
  state_ = std::move(state);
}

}  // namespace edgerl
