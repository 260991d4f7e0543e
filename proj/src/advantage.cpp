#include "edgerl/advantage.hpp"

#include <cmath>
#include <numeric>

#include "edgerl/errors.hpp"

namespace edgerl {

std::vector<double> gae(std::span<const double> rewards, std::span<const double> values, double gamma,
                        double lambda) {
  if (values.size() != rewards.size() + 1) {
    throw DimensionError("gae: values must hold one entry per reward plus the bootstrap value");
  }
  std::vector<double> adv(rewards.size());
  double running = 0.0;
  for (std::size_t t = rewards.size(); t-- > 0;) {
    const double delta = rewards[t] + gamma * values[t + 1] - values[t];
    running = delta + gamma * lambda * running;
    adv[t] = running;
  }
  return adv;
}

std::vector<double> gae(std::span<const double> rewards, std::span<const double> values,
                        std::span<const double> next_values, std::span<const unsigned char> cut, double gamma,
                        double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || next_values.size() != n || cut.size() != n) {
    throw DimensionError("gae: rewards, values, next values and cut flags must have equal length");
  }
  std::vector<double> adv(n);
  double running = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double delta = rewards[t] + gamma * next_values[t] - values[t];
    if (cut[t]) running = 0.0;
    running = delta + gamma * lambda * running;
    adv[t] = running;
  }
  return adv;
}

std::vector<double> standardize(std::span<const double> x) {
  std::vector<double> out(x.size(), 0.0);
  if (x.empty()) return out;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(x.size()));
  if (sd == 0.0) return out;
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = (x[k] - mean) / (sd + 1e-8);
  return out;
}

}  // namespace edgerl
