#include "edgerl/trainers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "edgerl/advantage.hpp"
#include "edgerl/errors.hpp"
#include "edgerl/scenario.hpp"

namespace edgerl {
namespace {

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': expected comma-separated integers");
    }
  }
  return out;
}

double parse_num(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NonFiniteError(std::string("non-finite ") + what + " during policy update");
}

void require_finite(std::span<const double> g, const char* what) {
  for (double v : g) {
    if (!std::isfinite(v)) throw NonFiniteError(std::string("non-finite ") + what + " gradient during policy update");
  }
}

struct SegmentValues {
  std::vector<double> values;  // V'(s^t)
  std::vector<double> next_values;  // V'(s^{t+1})
  std::vector<unsigned char> cut;
};

SegmentValues target_values(const CriticUnit& unit, std::span<const Transition> data) {
  SegmentValues sv;
  sv.values.reserve(data.size());
  sv.next_values.reserve(data.size());
  sv.cut.reserve(data.size());
  for (const auto& t : data) {
    sv.values.push_back(unit.norm.denormalize(unit.critic.target_value(t.obs)));
    sv.next_values.push_back(unit.norm.denormalize(unit.critic.target_value(t.next_obs)));
    sv.cut.push_back(t.episode_end ? 1 : 0);
  }
  return sv;
}

// Rescales the scalar output layer so denormalized outputs survive a change
// of statistics from (mu, sigma) to (mu2, sigma2).
void preserve_outputs(Mlp& net, double mu, double sigma, double mu2, double sigma2) {
  const auto p = net.params();
  const std::size_t last = static_cast<std::size_t>(net.layer_sizes()[net.layer_sizes().size() - 2]);
  double* w = p.data() + p.size() - last - 1;
  for (std::size_t k = 0; k < last; ++k) w[k] *= sigma / sigma2;
  w[last] = (sigma * w[last] + mu - mu2) / sigma2;
}

/// Regression targets in the critic's output units.
std::vector<double> critic_regression_targets(CriticUnit& unit, std::vector<double> targets, const HyperParams& hp) {
  if (!hp.value_norm) return targets;
  const double mu = unit.norm.mean();
  const double sigma = unit.norm.stddev();
  unit.norm.update(targets);
  preserve_outputs(unit.critic.net(), mu, sigma, unit.norm.mean(), unit.norm.stddev());
  preserve_outputs(unit.critic.target(), mu, sigma, unit.norm.mean(), unit.norm.stddev());
  for (double& t : targets) t = unit.norm.normalize(t);
  return targets;
}

template <typename Field>
std::vector<double> stream_advantages(std::span<const Transition> data, const SegmentValues& sv, Field field,
                                      const HyperParams& hp) {
  std::vector<double> rewards;
  rewards.reserve(data.size());
  for (const auto& t : data) rewards.push_back(t.*field);
  return gae(rewards, sv.values, sv.next_values, sv.cut, hp.gamma, hp.lambda);
}

void mean_std(std::span<const double> x, double& mean, double& sd) {
  mean = x.empty() ? 0.0 : std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  sd = x.empty() ? 0.0 : std::sqrt(var / static_cast<double>(x.size()));
}

double mean_abs(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

std::vector<double> negated(std::vector<double> g) {
  for (double& v : g) v = -v;
  return g;
}

void ascend(AllocActor& actor, const AllocGradient& g) {
  actor.optimizer.step(actor.policy.net().params(), negated(g.grad));
}

void ascend(ResolActor& actor, const ResolGradient& g) {
  actor.net_optimizer.step(actor.policy.net().params(), negated(g.net_grad));
  actor.log_std_optimizer.step(actor.policy.log_std(), negated(g.log_std_grad));
  actor.policy.clamp_log_std();
}

double descend(CriticUnit& unit, std::span<const Transition> data, std::span<const std::size_t> batch,
               std::span<const double> targets) {
  auto g = critic_loss_gradient(unit.critic.net(), data, batch, targets);
  require_finite(g.loss, "critic loss");
  require_finite(g.grad, "critic");
  unit.optimizer.step(unit.critic.net().params(), g.grad);
  return g.loss;
}

void finish_epoch(CriticUnit& unit, const HyperParams& hp) {
  ++unit.epochs;
  if (hp.target_period > 0 && unit.epochs % hp.target_period == 0) unit.critic.sync_target();
}

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

/// Per-step advantages of each field under the live critic, summed.
template <typename... Fields>
double live_mean_abs_advantage(const CriticUnit& unit, std::span<const Transition> data, const HyperParams& hp,
                               Fields... fields) {
  SegmentValues sv;
  for (const auto& t : data) {
    sv.values.push_back(unit.norm.denormalize(unit.critic.value(t.obs)));
    sv.next_values.push_back(unit.norm.denormalize(unit.critic.value(t.next_obs)));
    sv.cut.push_back(t.episode_end ? 1 : 0);
  }
  std::vector<double> total(data.size(), 0.0);
  for (const auto& a : {stream_advantages(data, sv, fields, hp)...}) {
    for (std::size_t t = 0; t < total.size(); ++t) total[t] += a[t];
  }
  return mean_abs(total);
}

/// Shared-critic update used by HAPPO (clipped, K epochs) and HAA2C
/// (policy gradient, one pass).
UpdateStats shared_critic_update(const RolloutBuffer& buffer, SharedCriticAgents& agents, const HyperParams& hp,
                                 SurrogateForm form, int epochs) {
  hp.validate();
  const std::span<const Transition> data = buffer.data();
  if (data.empty()) throw std::invalid_argument("policy update on an empty rollout buffer");
  UpdateStats stats;

  const SegmentValues sv = target_values(agents.critic, data);
  const auto adv_alloc = stream_advantages(data, sv, &Transition::reward_alloc, hp);
  const auto adv_resol = stream_advantages(data, sv, &Transition::reward_resol, hp);
  mean_std(adv_alloc, stats.adv_alloc_mean, stats.adv_alloc_std);
  mean_std(adv_resol, stats.adv_resol_mean, stats.adv_resol_std);

  std::vector<double> targets(data.size());
  std::vector<double> shared(data.size());
  for (std::size_t t = 0; t < data.size(); ++t) {
    targets[t] = critic_target(adv_alloc[t] + adv_resol[t], sv.next_values[t], hp.gamma);
    shared[t] = adv_alloc[t] + adv_resol[t];
  }
  targets = critic_regression_targets(agents.critic, std::move(targets), hp);
  if (hp.normalize_advantages) {
    const auto na = standardize(adv_alloc);
    const auto nr = standardize(adv_resol);
    for (std::size_t t = 0; t < data.size(); ++t) shared[t] = na[t] + nr[t];
  }
  {
    std::vector<double> raw(data.size());
    for (std::size_t t = 0; t < data.size(); ++t) raw[t] = adv_alloc[t] + adv_resol[t];
    stats.mean_abs_adv_initial = mean_abs(raw);
  }

  for (const auto& t : data) {
    const double r1 = std::exp(agents.alloc.policy.log_prob(t.obs, t.alloc) - t.log_prob_alloc);
    const double r2 = std::exp(agents.resol.policy.log_prob(t.obs, t.resol_pre_squash) - t.log_prob_resol);
    stats.max_initial_ratio_deviation =
        std::max({stats.max_initial_ratio_deviation, std::abs(r1 - 1.0), std::abs(r2 - 1.0)});
  }

  auto order = iota_indices(data.size());
  const std::size_t bs = std::min<std::size_t>(hp.batch_size, data.size());
  int steps = 0;
  double ratio1 = 0.0, ratio2 = 0.0;
  for (int k = 0; k < epochs; ++k) {
    std::shuffle(order.begin(), order.end(), agents.rng);
    double epoch_critic = 0.0;
    int epoch_steps = 0;
    for (std::size_t start = 0; start < order.size(); start += bs) {
      const std::span<const std::size_t> batch(order.data() + start, std::min(bs, order.size() - start));
      const auto g1 = alloc_objective_gradient(agents.alloc.policy, data, batch, shared, hp.clip_eps, form,
                                               hp.entropy_coef);
      const auto g2 = resol_objective_gradient(agents.resol.policy, data, batch, shared, hp.clip_eps, form,
                                               hp.entropy_coef);
      require_finite(g1.objective, "allocation actor objective");
      require_finite(g2.objective, "resolution actor objective");
      require_finite(g1.grad, "allocation actor");
      require_finite(g2.net_grad, "resolution actor");
      ascend(agents.alloc, g1);
      ascend(agents.resol, g2);
      const double closs = descend(agents.critic, data, batch, targets);

      stats.actor1_loss += -g1.objective;
      stats.actor2_loss += -g2.objective;
      stats.critic_loss += closs;
      ratio1 += g1.mean_ratio;
      ratio2 += g2.mean_ratio;
      epoch_critic += closs;
      ++epoch_steps;
      ++steps;
    }
    epoch_critic /= epoch_steps;
    if (k == 0) stats.first_epoch_critic_loss = epoch_critic;
    stats.final_epoch_critic_loss = epoch_critic;
    finish_epoch(agents.critic, hp);
  }
  stats.actor1_loss /= steps;
  stats.actor2_loss /= steps;
  stats.critic_loss /= steps;
  stats.mean_ratio1 = ratio1 / steps;
  stats.mean_ratio2 = ratio2 / steps;
  stats.mean_abs_adv_final = live_mean_abs_advantage(agents.critic, data, hp, &Transition::reward_alloc, &Transition::reward_resol);
  return stats;
}

/// One PPO learner with a private critic on its own reward stream.
template <typename Actor, typename GradFn, typename Field>
UpdateStats single_agent_update(const RolloutBuffer& buffer, Actor& actor, CriticUnit& critic,
                                std::mt19937_64& rng, const HyperParams& hp, GradFn grad_fn, Field field) {
  hp.validate();
  const std::span<const Transition> data = buffer.data();
  if (data.empty()) throw std::invalid_argument("policy update on an empty rollout buffer");
  UpdateStats stats;

  const SegmentValues sv = target_values(critic, data);
  const auto adv = stream_advantages(data, sv, field, hp);
  std::vector<double> targets(data.size());
  for (std::size_t t = 0; t < data.size(); ++t) targets[t] = critic_target(adv[t], sv.next_values[t], hp.gamma);
  targets = critic_regression_targets(critic, std::move(targets), hp);
  const auto actor_adv = hp.normalize_advantages ? standardize(adv) : adv;
  mean_std(adv, stats.adv_alloc_mean, stats.adv_alloc_std);
  stats.mean_abs_adv_initial = mean_abs(adv);

  auto order = iota_indices(data.size());
  const std::size_t bs = std::min<std::size_t>(hp.batch_size, data.size());
  int steps = 0;
  double ratio = 0.0;
  for (int k = 0; k < hp.epochs; ++k) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_critic = 0.0;
    int epoch_steps = 0;
    for (std::size_t start = 0; start < order.size(); start += bs) {
      const std::span<const std::size_t> batch(order.data() + start, std::min(bs, order.size() - start));
      const auto g = grad_fn(actor.policy, data, batch, actor_adv);
      require_finite(g.objective, "actor objective");
      ascend(actor, g);
      const double closs = descend(critic, data, batch, targets);
      stats.actor1_loss += -g.objective;
      stats.critic_loss += closs;
      ratio += g.mean_ratio;
      epoch_critic += closs;
      ++epoch_steps;
      ++steps;
    }
    epoch_critic /= epoch_steps;
    if (k == 0) stats.first_epoch_critic_loss = epoch_critic;
    stats.final_epoch_critic_loss = epoch_critic;
    finish_epoch(critic, hp);
  }
  stats.actor1_loss /= steps;
  stats.critic_loss /= steps;
  stats.mean_ratio1 = ratio / steps;
  stats.mean_abs_adv_final = live_mean_abs_advantage(critic, data, hp, field);
  return stats;
}

}  // namespace

// -- ValueNormalizer ---------------------------------------------------------

void ValueNormalizer::update(std::span<const double> x) {
  if (x.empty()) return;
  double m = 0.0;
  double sq = 0.0;
  for (double v : x) {
    m += v;
    sq += v * v;
  }
  m /= static_cast<double>(x.size());
  sq /= static_cast<double>(x.size());
  mean_ = kBeta * mean_ + (1.0 - kBeta) * m;
  mean_sq_ = kBeta * mean_sq_ + (1.0 - kBeta) * sq;
  debias_ = kBeta * debias_ + (1.0 - kBeta);
}

double ValueNormalizer::mean() const { return debias_ > 0.0 ? mean_ / debias_ : 0.0; }

double ValueNormalizer::stddev() const {
  if (debias_ <= 0.0) return 1.0;
  const double m = mean();
  return std::sqrt(std::max(mean_sq_ / debias_ - m * m, 1e-2));
}

void ValueNormalizer::set_state(std::span<const double> s) {
  if (s.size() != 3) throw DimensionError("value normalizer state has three entries");
  mean_ = s[0];
  mean_sq_ = s[1];
  debias_ = s[2];
}

// -- HyperParams ------------------------------------------------------------

void HyperParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid hyperparameters: ") + what);
  };
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0, 1]");
  require(clip_eps > 0.0, "clip_eps must be > 0");
  require(epochs >= 1, "epochs must be >= 1");
  require(batch_size >= 1 && segment_len >= 1, "batch_size and segment_len must be >= 1");
  require(segment_len % batch_size == 0, "batch_size must divide segment_len");
  require(actor_lr > 0.0 && critic_lr > 0.0, "learning rates must be > 0");
  require(target_period >= 1, "target_period must be >= 1");
  require(entropy_coef >= 0.0, "entropy_coef must be >= 0");
  for (int h : hidden) require(h >= 1, "hidden widths must be >= 1");
}

bool HyperParams::apply(const std::string& key, const std::string& value) {
  if (key == "gamma") gamma = parse_num(key, value);
  else if (key == "lambda") lambda = parse_num(key, value);
  else if (key == "clip_eps") clip_eps = parse_num(key, value);
  else if (key == "epochs") epochs = static_cast<int>(parse_num(key, value));
  else if (key == "batch_size") batch_size = static_cast<int>(parse_num(key, value));
  else if (key == "actor_lr") actor_lr = parse_num(key, value);
  else if (key == "critic_lr") critic_lr = parse_num(key, value);
  else if (key == "target_period") target_period = static_cast<int>(parse_num(key, value));
  else if (key == "segment_len") segment_len = static_cast<int>(parse_num(key, value));
  else if (key == "entropy_coef") entropy_coef = parse_num(key, value);
  else if (key == "normalize_advantages") normalize_advantages = parse_bool(value);
  else if (key == "ratio_first_clip") ratio_first_clip = parse_bool(value);
  else if (key == "value_norm") value_norm = parse_bool(value);
  else if (key == "hidden") hidden = parse_int_list(key, value);
  else return false;
  return true;
}

std::string HyperParams::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "gamma=" << gamma << "\nlambda=" << lambda << "\nclip_eps=" << clip_eps << "\nepochs=" << epochs
     << "\nbatch_size=" << batch_size << "\nactor_lr=" << actor_lr << "\ncritic_lr=" << critic_lr
     << "\ntarget_period=" << target_period << "\nsegment_len=" << segment_len << "\nentropy_coef=" << entropy_coef
     << "\nnormalize_advantages=" << (normalize_advantages ? "on" : "off")
     << "\nratio_first_clip=" << (ratio_first_clip ? "on" : "off")
     << "\nvalue_norm=" << (value_norm ? "on" : "off") << "\nhidden=";
  for (std::size_t k = 0; k < hidden.size(); ++k) os << (k ? "," : "") << hidden[k];
  os << '\n';
  return os.str();
}

// -- RolloutBuffer ----------------------------------------------------------

void RolloutBuffer::push(Transition t) {
  if (full()) throw std::logic_error("rollout buffer is full; run an update first");
  data_.push_back(std::move(t));
}

// -- agent construction -------------------------------------------------------

SharedCriticAgents SharedCriticAgents::create(const ScenarioConfig& cfg, const HyperParams& hp,
                                              std::uint64_t seed) {
  const int obs = observation_size(cfg);
  SharedCriticAgents a;
  a.alloc = AllocActor(AllocPolicy(obs, cfg.n_iov, cfg.n_mmbs, hp.hidden, seed * 4 + 1), hp.actor_lr);
  a.resol = ResolActor(ResolPolicy(obs, cfg.n_iov, cfg.p_min, cfg.p_max, hp.hidden, seed * 4 + 2), hp.actor_lr);
  a.critic = CriticUnit(Critic(obs, hp.hidden, seed * 4 + 3), hp.critic_lr);
  a.rng.seed(seed * 4 + 4);
  return a;
}

IndependentAgents IndependentAgents::create(const ScenarioConfig& cfg, const HyperParams& hp, std::uint64_t seed) {
  const int obs = observation_size(cfg);
  IndependentAgents a;
  a.alloc = AllocActor(AllocPolicy(obs, cfg.n_iov, cfg.n_mmbs, hp.hidden, seed * 8 + 1), hp.actor_lr);
  a.alloc_critic = CriticUnit(Critic(obs, hp.hidden, seed * 8 + 3), hp.critic_lr);
  a.resol = ResolActor(ResolPolicy(obs, cfg.n_iov, cfg.p_min, cfg.p_max, hp.hidden, seed * 8 + 2), hp.actor_lr);
  a.resol_critic = CriticUnit(Critic(obs, hp.hidden, seed * 8 + 5), hp.critic_lr);
  a.alloc_rng.seed(seed * 8 + 6);
  a.resol_rng.seed(seed * 8 + 7);
  return a;
}

// -- gradient kernels -------------------------------------------------------

AllocGradient alloc_objective_gradient(const AllocPolicy& policy, std::span<const Transition> data,
                                       std::span<const std::size_t> batch, std::span<const double> advantage,
                                       double clip_eps, SurrogateForm form, double entropy_coef) {
  AllocGradient out;
  out.grad.assign(policy.net().parameter_count(), 0.0);
  if (batch.empty()) return out;
  const double inv = 1.0 / static_cast<double>(batch.size());
  ForwardCache cache;
  for (std::size_t idx : batch) {
    const auto& t = data[idx];
    // The weight depends on the new log-prob, so evaluate it first.
    const double lp = policy.log_prob(t.obs, t.alloc);
    const double a = advantage[idx];
    const double w = surrogate_log_prob_weight(lp, t.log_prob_alloc, a, clip_eps, form);
    policy.accumulate_gradient(t.obs, t.alloc, w * inv, entropy_coef * inv, out.grad, cache);
    out.objective += surrogate(lp, t.log_prob_alloc, a, clip_eps, form) * inv;
    out.mean_ratio += std::exp(lp - t.log_prob_alloc) * inv;
  }
  if (entropy_coef != 0.0) {
    for (std::size_t idx : batch) {
      const auto probs = policy.probabilities(data[idx].obs);
      double h = 0.0;
      for (double p : probs) {
        if (p > 0.0) h -= p * std::log(p);
      }
      out.objective += entropy_coef * h * inv;
    }
  }
  return out;
}

ResolGradient resol_objective_gradient(const ResolPolicy& policy, std::span<const Transition> data,
                                       std::span<const std::size_t> batch, std::span<const double> advantage,
                                       double clip_eps, SurrogateForm form, double entropy_coef) {
  ResolGradient out;
  out.net_grad.assign(policy.net().parameter_count(), 0.0);
  out.log_std_grad.assign(policy.log_std().size(), 0.0);
  if (batch.empty()) return out;
  const double inv = 1.0 / static_cast<double>(batch.size());
  ForwardCache cache;
  for (std::size_t idx : batch) {
    const auto& t = data[idx];
    const double lp = policy.log_prob(t.obs, t.resol_pre_squash);
    const double a = advantage[idx];
    const double w = surrogate_log_prob_weight(lp, t.log_prob_resol, a, clip_eps, form);
    policy.accumulate_gradient(t.obs, t.resol_pre_squash, w * inv, entropy_coef * inv, out.net_grad,
                               out.log_std_grad, cache);
    out.objective += surrogate(lp, t.log_prob_resol, a, clip_eps, form) * inv;
    out.mean_ratio += std::exp(lp - t.log_prob_resol) * inv;
  }
  if (entropy_coef != 0.0) {
    // Gaussian entropy: sum(log_std) + const per sample.
    double h = 0.0;
    for (double s : policy.log_std()) h += s;
    out.objective += entropy_coef * h;
  }
  return out;
}

CriticGradient critic_loss_gradient(const Mlp& critic, std::span<const Transition> data,
                                    std::span<const std::size_t> batch, std::span<const double> targets) {
  CriticGradient out;
  out.grad.assign(critic.parameter_count(), 0.0);
  if (batch.empty()) return out;
  const double inv = 1.0 / static_cast<double>(batch.size());
  ForwardCache cache;
  for (std::size_t idx : batch) {
    const double v = critic.forward(data[idx].obs, cache)[0];
    const double e = v - targets[idx];
    out.loss += e * e * inv;
    const double upstream = 2.0 * e * inv;
    critic.accumulate_gradient(cache, std::span<const double>(&upstream, 1), out.grad);
  }
  return out;
}

// -- updates ----------------------------------------------------------------

UpdateStats happo_update(const RolloutBuffer& buffer, SharedCriticAgents& agents, const HyperParams& hp) {
  return shared_critic_update(buffer, agents, hp, hp.clipped_form(), hp.epochs);
}

UpdateStats haa2c_update(const RolloutBuffer& buffer, SharedCriticAgents& agents, const HyperParams& hp) {
  return shared_critic_update(buffer, agents, hp, SurrogateForm::kPolicyGradient, 1);
}

UpdateStats update_alloc_agent(const RolloutBuffer& buffer, AllocActor& actor, CriticUnit& critic,
                               std::mt19937_64& rng, const HyperParams& hp) {
  auto grad = [&hp](const AllocPolicy& p, std::span<const Transition> d, std::span<const std::size_t> b,
                    std::span<const double> a) {
    return alloc_objective_gradient(p, d, b, a, hp.clip_eps, hp.clipped_form(), hp.entropy_coef);
  };
  return single_agent_update(buffer, actor, critic, rng, hp, grad, &Transition::reward_alloc);
}

UpdateStats update_resol_agent(const RolloutBuffer& buffer, ResolActor& actor, CriticUnit& critic,
                               std::mt19937_64& rng, const HyperParams& hp) {
  auto grad = [&hp](const ResolPolicy& p, std::span<const Transition> d, std::span<const std::size_t> b,
                    std::span<const double> a) {
    return resol_objective_gradient(p, d, b, a, hp.clip_eps, hp.clipped_form(), hp.entropy_coef);
  };
  return single_agent_update(buffer, actor, critic, rng, hp, grad, &Transition::reward_resol);
}

UpdateStats independent_ppo_update(const RolloutBuffer& buffer, IndependentAgents& agents, const HyperParams& hp) {
  const auto s1 = update_alloc_agent(buffer, agents.alloc, agents.alloc_critic, agents.alloc_rng, hp);
  const auto s2 = update_resol_agent(buffer, agents.resol, agents.resol_critic, agents.resol_rng, hp);
  UpdateStats out = s1;
  out.actor2_loss = s2.actor1_loss;
  out.mean_ratio2 = s2.mean_ratio1;
  out.critic_loss = 0.5 * (s1.critic_loss + s2.critic_loss);
  out.adv_resol_mean = s2.adv_alloc_mean;
  out.adv_resol_std = s2.adv_alloc_std;
  out.first_epoch_critic_loss = s2.first_epoch_critic_loss;
  out.final_epoch_critic_loss = s2.final_epoch_critic_loss;
  out.mean_abs_adv_initial = s2.mean_abs_adv_initial;
  out.mean_abs_adv_final = s2.mean_abs_adv_final;
  return out;
}

JointAction random_policy(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> cell(0, cfg.n_mmbs);
  std::uniform_real_distribution<double> res(cfg.p_min, cfg.p_max);
  JointAction a;
  a.alloc.resize(cfg.n_iov);
  a.resol.resize(cfg.n_iov);
  for (int i = 0; i < cfg.n_iov; ++i) {
    const int c = cell(rng);
    a.alloc[i] = c == cfg.n_mmbs ? kIdle : c;
    a.resol[i] = res(rng);
  }
  return a;
}

}  // namespace edgerl
