#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "edgerl/mlp.hpp"
#include "edgerl/objectives.hpp"
#include "edgerl/policies.hpp"
#include "edgerl/uplink_env.hpp"

namespace edgerl {

struct HyperParams {
  double gamma = 0.99;
  double lambda = 0.95;
  double clip_eps = 0.2;
  int epochs = 10;
  int batch_size = 250;
  double actor_lr = 3e-4;
  double critic_lr = 1e-3;
  int target_period = 5;  // epochs between phi' <- phi
  int segment_len = 1000;
  double entropy_coef = 0.0;
  bool normalize_advantages = true;
  bool ratio_first_clip = false;  // min over ratios before weighting by A
  bool value_norm = true;  // critic regresses onto running-standardized targets
  std::vector<int> hidden{64, 64};

  void validate() const;
  /// Applies one `key=value` setting; false for unknown keys.
  bool apply(const std::string& key, const std::string& value);
  [[nodiscard]] std::string to_text() const;
  [[nodiscard]] SurrogateForm clipped_form() const {
    return ratio_first_clip ? SurrogateForm::kClippedRatioFirst : SurrogateForm::kClipped;
  }
};

/// One environment step as seen by both agents.
struct Transition {
  std::vector<double> obs;
  std::vector<double> next_obs;
  std::vector<int> alloc;
  std::vector<double> resol_pre_squash;
  std::vector<double> resol;
  double log_prob_alloc = 0.0;
  double log_prob_resol = 0.0;
  double reward_alloc = 0.0;
  double reward_resol = 0.0;
  bool episode_end = false;  // next_obs ends an episode; the trace stops here
};

/// Fixed-capacity trajectory segment. Values are attached at update time from
/// the target critic.
class RolloutBuffer {
 public:
  explicit RolloutBuffer(int capacity) : capacity_(capacity) { data_.reserve(capacity); }

  void push(Transition t);
  [[nodiscard]] bool full() const { return static_cast<int>(data_.size()) >= capacity_; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] int capacity() const { return capacity_; }
  [[nodiscard]] const std::vector<Transition>& data() const { return data_; }
  void clear() { data_.clear(); }

 private:
  int capacity_;
  std::vector<Transition> data_;
};

struct AllocActor {
  AllocPolicy policy;
  Adam optimizer;
  AllocActor() = default;
  AllocActor(AllocPolicy p, double lr) : policy(std::move(p)), optimizer(policy.net().parameter_count(), {lr}) {}
};

struct ResolActor {
  ResolPolicy policy;
  Adam net_optimizer;
  Adam log_std_optimizer;
  ResolActor() = default;
  ResolActor(ResolPolicy p, double lr)
      : policy(std::move(p)),
        net_optimizer(policy.net().parameter_count(), {lr}),
        log_std_optimizer(policy.log_std().size(), {lr}) {}
};

/// Running mean and variance of critic targets with the slow exponential
/// decay used by common PPO value normalizers. Identity until the first update.
class ValueNormalizer {
 public:
  static constexpr double kBeta = 0.99999;
  void update(std::span<const double> x);
  [[nodiscard]] double mean() const;
  [[nodiscard]] double stddev() const;
  [[nodiscard]] double normalize(double v) const { return (v - mean()) / stddev(); }
  [[nodiscard]] double denormalize(double v) const { return v * stddev() + mean(); }
  /// {running mean, running mean of squares, debiasing weight}.
  [[nodiscard]] std::vector<double> state() const { return {mean_, mean_sq_, debias_}; }
  void set_state(std::span<const double> s);

 private:
  double mean_ = 0.0;
  double mean_sq_ = 0.0;
  double debias_ = 0.0;
};

struct CriticUnit {
  Critic critic;
  Adam optimizer;
  ValueNormalizer norm;
  long long epochs = 0;  // epochs trained, drives the target refresh
  CriticUnit() = default;
  CriticUnit(Critic c, double lr) : critic(std::move(c)), optimizer(critic.net().parameter_count(), {lr}) {}
};

/// Dual actors sharing one critic (HAPPO and HAA2C).
struct SharedCriticAgents {
  AllocActor alloc;
  ResolActor resol;
  CriticUnit critic;
  std::mt19937_64 rng;  // minibatch shuffling

  static SharedCriticAgents create(const ScenarioConfig& cfg, const HyperParams& hp, std::uint64_t seed);
};

/// Dual actors with private critics (independent PPO-PPO).
struct IndependentAgents {
  AllocActor alloc;
  CriticUnit alloc_critic;
  ResolActor resol;
  CriticUnit resol_critic;
  std::mt19937_64 alloc_rng;
  std::mt19937_64 resol_rng;

  static IndependentAgents create(const ScenarioConfig& cfg, const HyperParams& hp, std::uint64_t seed);
};

struct UpdateStats {
  double actor1_loss = 0.0;  // negated surrogate, averaged over minibatch steps
  double actor2_loss = 0.0;
  double critic_loss = 0.0;  // shared critic, or the mean of the private pair
  double mean_ratio1 = 1.0;
  double mean_ratio2 = 1.0;
  double max_initial_ratio_deviation = 0.0;  // |rho - 1| before the first gradient step
  double adv_alloc_mean = 0.0;
  double adv_alloc_std = 0.0;
  double adv_resol_mean = 0.0;
  double adv_resol_std = 0.0;
  double first_epoch_critic_loss = 0.0;
  double final_epoch_critic_loss = 0.0;
  double mean_abs_adv_initial = 0.0;  // unnormalized mean |A| (summed streams when shared; resolution agent for ippo)
  double mean_abs_adv_final = 0.0;  // the same quantity under the live critic after the last epoch
};

// -- gradient kernels -------------------------------------------------------

struct AllocGradient {
  double objective = 0.0;
  double mean_ratio = 0.0;
  std::vector<double> grad;  // d objective / d theta_1
};

struct ResolGradient {
  double objective = 0.0;
  double mean_ratio = 0.0;
  std::vector<double> net_grad;
  std::vector<double> log_std_grad;
};

struct CriticGradient {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d phi
};

/// Minibatch surrogate for the allocation actor and its parameter gradient.
/// `advantage` is indexed like `data`; `batch` selects rows.
AllocGradient alloc_objective_gradient(const AllocPolicy& policy, std::span<const Transition> data,
                                       std::span<const std::size_t> batch, std::span<const double> advantage,
                                       double clip_eps, SurrogateForm form, double entropy_coef);

ResolGradient resol_objective_gradient(const ResolPolicy& policy, std::span<const Transition> data,
                                       std::span<const std::size_t> batch, std::span<const double> advantage,
                                       double clip_eps, SurrogateForm form, double entropy_coef);

/// Mean squared error of V_phi(s^t) against fixed `targets`.
CriticGradient critic_loss_gradient(const Mlp& critic, std::span<const Transition> data,
                                    std::span<const std::size_t> batch, std::span<const double> targets);

// -- updates ----------------------------------------------------------------

/// Heterogeneous-action PPO: both actors ascend the clipped surrogate on the
/// shared advantage sum, the shared critic regresses onto A_sum + gamma V'(s').
UpdateStats happo_update(const RolloutBuffer& buffer, SharedCriticAgents& agents, const HyperParams& hp);

/// Same structure with the unclipped policy gradient and a single pass.
UpdateStats haa2c_update(const RolloutBuffer& buffer, SharedCriticAgents& agents, const HyperParams& hp);

/// Two PPO learners, each with a private critic and its own reward stream.
UpdateStats independent_ppo_update(const RolloutBuffer& buffer, IndependentAgents& agents, const HyperParams& hp);

/// Per-agent halves of independent_ppo_update.
UpdateStats update_alloc_agent(const RolloutBuffer& buffer, AllocActor& actor, CriticUnit& critic,
                               std::mt19937_64& rng, const HyperParams& hp);
UpdateStats update_resol_agent(const RolloutBuffer& buffer, ResolActor& actor, CriticUnit& critic,
                               std::mt19937_64& rng, const HyperParams& hp);

/// Uniform allocation over {0..M-1, idle} and uniform resolution per IoV.
JointAction random_policy(const ScenarioConfig& cfg, std::mt19937_64& rng);

}  // namespace edgerl
