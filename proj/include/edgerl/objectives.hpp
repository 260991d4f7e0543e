#pragma once

#include <span>

namespace edgerl {

/// Per-sample actor surrogate.
enum class SurrogateForm {
  /// min(rho A, clip(rho, 1-eps, 1+eps) A), the pessimistic PPO bound.
  kClipped,
  /// min(rho, clip(rho, 1-eps, 1+eps)) A: the minimum is taken over ratios
  /// before weighting, which drops the pessimistic branch for A < 0.
  kClippedRatioFirst,
  /// log pi(a|s) A with no ratio (advantage actor-critic).
  kPolicyGradient,
};

/// Surrogate value of one sample from its new and behavior log-probs.
double surrogate(double log_prob_new, double log_prob_old, double advantage, double clip_eps, SurrogateForm form);

/// d surrogate / d log_prob_new. Zero where the clipped branch is active.
double surrogate_log_prob_weight(double log_prob_new, double log_prob_old, double advantage, double clip_eps,
                                 SurrogateForm form);

/// Batch mean of `surrogate`; the quantity the actors maximize.
double ppo_actor_objective(std::span<const double> log_prob_new, std::span<const double> log_prob_old,
                           std::span<const double> advantage_sum, double clip_eps,
                           SurrogateForm form = SurrogateForm::kClipped);

/// Value target A_alloc + A_resol + gamma V'(s^{t+1}) built from the frozen
/// target critic.
inline double critic_target(double advantage_sum, double next_target_value, double gamma) {
  return advantage_sum + gamma * next_target_value;
}

/// Mean of (V(s^t) - critic_target)^2 over the batch.
double critic_loss(std::span<const double> values, std::span<const double> advantage_sum,
                   std::span<const double> next_target_values, double gamma);

}  // namespace edgerl
