#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "edgerl/mlp.hpp"

namespace edgerl {

/// Discrete allocation actor: N independent categorical heads over
/// {MMBS 0..M-1, idle}. Head choice M is emitted as kIdle.
class AllocPolicy {
 public:
  AllocPolicy() = default;
  AllocPolicy(int obs_dim, int n_iov, int n_mmbs, const std::vector<int>& hidden, std::uint64_t seed);
  /// Wraps an existing network whose output width is n_iov * (n_mmbs + 1).
  AllocPolicy(Mlp net, int n_iov, int n_mmbs);

  struct Sample {
    std::vector<int> alloc;
    double log_prob = 0.0;
  };

  [[nodiscard]] int heads() const { return n_iov_; }
  [[nodiscard]] int choices() const { return n_mmbs_ + 1; }

  /// Per-head probabilities, head-major (N x (M+1)).
  [[nodiscard]] std::vector<double> probabilities(std::span<const double> obs) const;
  Sample sample(std::span<const double> obs, std::mt19937_64& rng) const;
  /// Arg-max choice per head.
  [[nodiscard]] std::vector<int> greedy(std::span<const double> obs) const;
  /// Sum of per-head log-probabilities of `alloc`.
  [[nodiscard]] double log_prob(std::span<const double> obs, std::span<const int> alloc) const;

  /// Adds `weight * d log_prob / d theta` plus `entropy_weight * d H / d theta`
  /// (H = summed per-head entropy) into `grad`. Returns log_prob.
  double accumulate_gradient(std::span<const double> obs, std::span<const int> alloc, double weight,
                             double entropy_weight, std::span<double> grad, ForwardCache& cache) const;

  Mlp& net() { return net_; }
  [[nodiscard]] const Mlp& net() const { return net_; }

 private:
  [[nodiscard]] int head_choice(int mmbs_or_idle) const;
  void softmax_heads(std::span<const double> logits, std::vector<double>& probs) const;

  Mlp net_;
  int n_iov_ = 0;
  int n_mmbs_ = 0;
};

/// Continuous resolution actor: a diagonal Gaussian in pre-squash space with
/// state-independent log standard deviations; z maps to
/// p_min + (tanh(z) + 1) / 2 * (p_max - p_min).
class ResolPolicy {
 public:
  static constexpr double kLogStdMin = -5.0;
  static constexpr double kLogStdMax = 2.0;

  ResolPolicy() = default;
  ResolPolicy(int obs_dim, int n_iov, double p_min, double p_max, const std::vector<int>& hidden,
              std::uint64_t seed, double initial_log_std = 0.0);
  ResolPolicy(Mlp net, std::vector<double> log_std, double p_min, double p_max);

  struct Sample {
    std::vector<double> pre_squash;
    std::vector<double> resolution;
    double log_prob = 0.0;
  };

  [[nodiscard]] int dims() const { return static_cast<int>(log_std_.size()); }
  [[nodiscard]] double squash(double z) const;

  [[nodiscard]] std::vector<double> mean(std::span<const double> obs) const { return net_.forward(obs); }
  Sample sample(std::span<const double> obs, std::mt19937_64& rng) const;
  /// Resolutions at the Gaussian mean.
  [[nodiscard]] std::vector<double> deterministic(std::span<const double> obs) const;
  /// Diagonal-Gaussian log-density of `pre_squash` (no tanh correction).
  [[nodiscard]] double log_prob(std::span<const double> obs, std::span<const double> pre_squash) const;

  /// Adds `weight * d log_prob / d theta` into `net_grad` and `log_std_grad`,
  /// plus `entropy_weight * d H / d log_std`. Returns log_prob.
  double accumulate_gradient(std::span<const double> obs, std::span<const double> pre_squash, double weight,
                             double entropy_weight, std::span<double> net_grad, std::span<double> log_std_grad,
                             ForwardCache& cache) const;

  /// Projects log_std back into [kLogStdMin, kLogStdMax].
  void clamp_log_std();

  Mlp& net() { return net_; }
  [[nodiscard]] const Mlp& net() const { return net_; }
  std::vector<double>& log_std() { return log_std_; }
  [[nodiscard]] const std::vector<double>& log_std() const { return log_std_; }
  [[nodiscard]] double p_min() const { return p_min_; }
  [[nodiscard]] double p_max() const { return p_max_; }

 private:
  Mlp net_;
  std::vector<double> log_std_;
  double p_min_ = 0.0;
  double p_max_ = 1.0;
};

/// State-value network V_phi with a frozen target copy V_phi'.
class Critic {
 public:
  Critic() = default;
  Critic(int obs_dim, const std::vector<int>& hidden, std::uint64_t seed);
  explicit Critic(Mlp net);

  [[nodiscard]] double value(std::span<const double> obs) const { return net_.forward(obs)[0]; }
  [[nodiscard]] double target_value(std::span<const double> obs) const { return target_.forward(obs)[0]; }
  /// phi' <- phi.
  void sync_target();

  Mlp& net() { return net_; }
  [[nodiscard]] const Mlp& net() const { return net_; }
  Mlp& target() { return target_; }
  [[nodiscard]] const Mlp& target() const { return target_; }

 private:
  Mlp net_;
  Mlp target_;
};

}  // namespace edgerl
