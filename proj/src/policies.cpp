#include "edgerl/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "edgerl/errors.hpp"
#include "edgerl/uplink_env.hpp"

namespace edgerl {
namespace {

std::vector<int> layers(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

constexpr double kHalfLogTwoPi = 0.91893853320467274178;  // 0.5 * ln(2 pi)

}  // namespace

// -- AllocPolicy ------------------------------------------------------------

AllocPolicy::AllocPolicy(int obs_dim, int n_iov, int n_mmbs, const std::vector<int>& hidden, std::uint64_t seed)
    : AllocPolicy(Mlp::initialized(layers(obs_dim, hidden, n_iov * (n_mmbs + 1)), seed, 0.01), n_iov, n_mmbs) {}

AllocPolicy::AllocPolicy(Mlp net, int n_iov, int n_mmbs) : net_(std::move(net)), n_iov_(n_iov), n_mmbs_(n_mmbs) {
  if (net_.output_size() != n_iov * (n_mmbs + 1)) {
    throw DimensionError("allocation network must emit n_iov * (n_mmbs + 1) logits");
  }
}

int AllocPolicy::head_choice(int mmbs_or_idle) const {
  if (mmbs_or_idle == kIdle) return n_mmbs_;
  if (mmbs_or_idle < 0 || mmbs_or_idle >= n_mmbs_) throw DomainError("allocation index out of range");
  return mmbs_or_idle;
}

void AllocPolicy::softmax_heads(std::span<const double> logits, std::vector<double>& probs) const {
  const int k = choices();
  probs.resize(logits.size());
  for (int h = 0; h < n_iov_; ++h) {
    const auto* z = logits.data() + static_cast<std::size_t>(h) * k;
    double* p = probs.data() + static_cast<std::size_t>(h) * k;
    const double top = *std::max_element(z, z + k);
    double total = 0.0;
    for (int c = 0; c < k; ++c) {
      p[c] = std::exp(z[c] - top);
      total += p[c];
    }
    for (int c = 0; c < k; ++c) p[c] /= total;
  }
}

std::vector<double> AllocPolicy::probabilities(std::span<const double> obs) const {
  std::vector<double> probs;
  softmax_heads(net_.forward(obs), probs);
  return probs;
}

AllocPolicy::Sample AllocPolicy::sample(std::span<const double> obs, std::mt19937_64& rng) const {
  const auto probs = probabilities(obs);
  const int k = choices();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Sample s;
  s.alloc.resize(n_iov_);
  for (int h = 0; h < n_iov_; ++h) {
    const double* p = probs.data() + static_cast<std::size_t>(h) * k;
    const double u = unit(rng);
    int choice = k - 1;
    double cumulative = 0.0;
    for (int c = 0; c < k; ++c) {
      cumulative += p[c];
      if (u < cumulative) {
        choice = c;
        break;
      }
    }
    s.alloc[h] = choice == n_mmbs_ ? kIdle : choice;
    s.log_prob += std::log(p[choice]);
  }
  return s;
}

std::vector<int> AllocPolicy::greedy(std::span<const double> obs) const {
  const auto logits = net_.forward(obs);
  const int k = choices();
  std::vector<int> alloc(n_iov_);
  for (int h = 0; h < n_iov_; ++h) {
    const auto* z = logits.data() + static_cast<std::size_t>(h) * k;
    const int choice = static_cast<int>(std::max_element(z, z + k) - z);
    alloc[h] = choice == n_mmbs_ ? kIdle : choice;
  }
  return alloc;
}

double AllocPolicy::log_prob(std::span<const double> obs, std::span<const int> alloc) const {
  if (static_cast<int>(alloc.size()) != n_iov_) throw DimensionError("allocation width mismatch");
  const auto probs = probabilities(obs);
  const int k = choices();
  double lp = 0.0;
  for (int h = 0; h < n_iov_; ++h) lp += std::log(probs[static_cast<std::size_t>(h) * k + head_choice(alloc[h])]);
  return lp;
}

double AllocPolicy::accumulate_gradient(std::span<const double> obs, std::span<const int> alloc, double weight,
                                        double entropy_weight, std::span<double> grad, ForwardCache& cache) const {
  if (static_cast<int>(alloc.size()) != n_iov_) throw DimensionError("allocation width mismatch");
  const auto logits = net_.forward(obs, cache);
  std::vector<double> probs;
  softmax_heads(logits, probs);
  const int k = choices();
  std::vector<double> upstream(probs.size());
  double lp = 0.0;
  for (int h = 0; h < n_iov_; ++h) {
    const std::size_t base = static_cast<std::size_t>(h) * k;
    const int chosen = head_choice(alloc[h]);
    lp += std::log(probs[base + chosen]);
    double entropy = 0.0;
    if (entropy_weight != 0.0) {
      for (int c = 0; c < k; ++c) {
        const double p = probs[base + c];
        if (p > 0.0) entropy -= p * std::log(p);
      }
    }
    for (int c = 0; c < k; ++c) {
      const double p = probs[base + c];
      // d log p_chosen / d z_c = [c == chosen] - p_c
      double g = weight * ((c == chosen ? 1.0 : 0.0) - p);
      // d H / d z_c = -p_c (log p_c + H)
      if (entropy_weight != 0.0 && p > 0.0) g -= entropy_weight * p * (std::log(p) + entropy);
      upstream[base + c] = g;
    }
  }
  net_.accumulate_gradient(cache, upstream, grad);
  return lp;
}

// -- ResolPolicy ------------------------------------------------------------

ResolPolicy::ResolPolicy(int obs_dim, int n_iov, double p_min, double p_max, const std::vector<int>& hidden,
                         std::uint64_t seed, double initial_log_std)
    : ResolPolicy(Mlp::initialized(layers(obs_dim, hidden, n_iov), seed, 0.01),
                  std::vector<double>(n_iov, initial_log_std), p_min, p_max) {}

ResolPolicy::ResolPolicy(Mlp net, std::vector<double> log_std, double p_min, double p_max)
    : net_(std::move(net)), log_std_(std::move(log_std)), p_min_(p_min), p_max_(p_max) {
  if (net_.output_size() != static_cast<int>(log_std_.size())) {
    throw DimensionError("resolution network width must equal the number of log-std entries");
  }
  if (!(p_min < p_max)) throw DomainError("resolution bounds must satisfy p_min < p_max");
  clamp_log_std();
}

double ResolPolicy::squash(double z) const {
  const double p = p_min_ + 0.5 * (std::tanh(z) + 1.0) * (p_max_ - p_min_);
  return std::clamp(p, p_min_, p_max_);
}

ResolPolicy::Sample ResolPolicy::sample(std::span<const double> obs, std::mt19937_64& rng) const {
  const auto mu = net_.forward(obs);
  std::normal_distribution<double> normal(0.0, 1.0);
  Sample s;
  s.pre_squash.resize(mu.size());
  s.resolution.resize(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    s.pre_squash[i] = mu[i] + std::exp(log_std_[i]) * normal(rng);
    s.resolution[i] = squash(s.pre_squash[i]);
    // Same expression as log_prob() so behavior and fresh log-probs agree bitwise.
    const double u = (s.pre_squash[i] - mu[i]) * std::exp(-log_std_[i]);
    s.log_prob += -0.5 * u * u - log_std_[i] - kHalfLogTwoPi;
  }
  return s;
}

std::vector<double> ResolPolicy::deterministic(std::span<const double> obs) const {
  auto mu = net_.forward(obs);
  for (double& v : mu) v = squash(v);
  return mu;
}

double ResolPolicy::log_prob(std::span<const double> obs, std::span<const double> pre_squash) const {
  if (pre_squash.size() != log_std_.size()) throw DimensionError("resolution action width mismatch");
  const auto mu = net_.forward(obs);
  double lp = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double u = (pre_squash[i] - mu[i]) * std::exp(-log_std_[i]);
    lp += -0.5 * u * u - log_std_[i] - kHalfLogTwoPi;
  }
  return lp;
}

double ResolPolicy::accumulate_gradient(std::span<const double> obs, std::span<const double> pre_squash,
                                        double weight, double entropy_weight, std::span<double> net_grad,
                                        std::span<double> log_std_grad, ForwardCache& cache) const {
  if (pre_squash.size() != log_std_.size() || log_std_grad.size() != log_std_.size()) {
    throw DimensionError("resolution action width mismatch");
  }
  const auto mu = net_.forward(obs, cache);
  std::vector<double> upstream(mu.size());
  double lp = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double inv_sd = std::exp(-log_std_[i]);
    const double u = (pre_squash[i] - mu[i]) * inv_sd;
    lp += -0.5 * u * u - log_std_[i] - kHalfLogTwoPi;
    upstream[i] = weight * u * inv_sd;  // d lp / d mu
    log_std_grad[i] += weight * (u * u - 1.0) + entropy_weight;  // H = sum log_std + const
  }
  net_.accumulate_gradient(cache, upstream, net_grad);
  return lp;
}

void ResolPolicy::clamp_log_std() {
  for (double& s : log_std_) s = std::clamp(s, kLogStdMin, kLogStdMax);
}

// -- Critic -----------------------------------------------------------------

Critic::Critic(int obs_dim, const std::vector<int>& hidden, std::uint64_t seed)
    : Critic(Mlp::initialized(layers(obs_dim, hidden, 1), seed)) {}

Critic::Critic(Mlp net) : net_(std::move(net)), target_(net_) {
  if (net_.output_size() != 1) throw DimensionError("critic network must have a scalar output");
}

void Critic::sync_target() { target_ = net_; }

}  // namespace edgerl
