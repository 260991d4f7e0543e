#include "edgerl/objectives.hpp"

#include <algorithm>
#include <cmath>

#include "edgerl/errors.hpp"

namespace edgerl {

double surrogate(double log_prob_new, double log_prob_old, double advantage, double clip_eps, SurrogateForm form) {
  if (form == SurrogateForm::kPolicyGradient) return log_prob_new * advantage;
  const double ratio = std::exp(log_prob_new - log_prob_old);
  const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
  if (form == SurrogateForm::kClippedRatioFirst) return std::min(ratio, clipped) * advantage;
  return std::min(ratio * advantage, clipped * advantage);
}

double surrogate_log_prob_weight(double log_prob_new, double log_prob_old, double advantage, double clip_eps,
                                 SurrogateForm form) {
  if (form == SurrogateForm::kPolicyGradient) return advantage;
  const double ratio = std::exp(log_prob_new - log_prob_old);
  const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
  const bool ratio_branch = form == SurrogateForm::kClippedRatioFirst ? ratio <= clipped
                                                                      : ratio * advantage <= clipped * advantage;
  // d(rho A)/d log_prob = rho A; the clipped constant has no gradient.
  return ratio_branch ? ratio * advantage : 0.0;
}

double ppo_actor_objective(std::span<const double> log_prob_new, std::span<const double> log_prob_old,
                           std::span<const double> advantage_sum, double clip_eps, SurrogateForm form) {
  if (log_prob_new.size() != log_prob_old.size() || log_prob_new.size() != advantage_sum.size()) {
    throw DimensionError("ppo_actor_objective: input lengths differ");
  }
  if (log_prob_new.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < log_prob_new.size(); ++k) {
    total += surrogate(log_prob_new[k], log_prob_old[k], advantage_sum[k], clip_eps, form);
  }
  return total / static_cast<double>(log_prob_new.size());
}

double critic_loss(std::span<const double> values, std::span<const double> advantage_sum,
                   std::span<const double> next_target_values, double gamma) {
  if (values.size() != advantage_sum.size() || values.size() != next_target_values.size()) {
    throw DimensionError("critic_loss: input lengths differ");
  }
  if (values.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double e = values[k] - critic_target(advantage_sum[k], next_target_values[k], gamma);
    total += e * e;
  }
  return total / static_cast<double>(values.size());
}

}  // namespace edgerl
