#pragma once

#include <span>
#include <vector>

namespace edgerl {

/// Truncated TD(lambda) advantages over one trajectory segment.
///
/// `values` holds V(s^1..s^T) followed by the bootstrap value V(s^{T+1}).
/// delta^t = r^t + gamma V(s^{t+1}) - V(s^t) and
/// A^t = sum_{k >= 0} (gamma lambda)^k delta^{t+k}, truncated at the segment end.
std::vector<double> gae(std::span<const double> rewards, std::span<const double> values, double gamma,
                        double lambda);

/// Same estimator over a segment that may span several episodes. `values[t]`
/// is V(s^t), `next_values[t]` is V of the state reached from s^t, and
/// `cut[t]` stops the trace after step t (episode boundary).
std::vector<double> gae(std::span<const double> rewards, std::span<const double> values,
                        std::span<const double> next_values, std::span<const unsigned char> cut, double gamma,
                        double lambda);

/// Returns (x - mean) / (std + 1e-8); an empty or constant input maps to zeros.
std::vector<double> standardize(std::span<const double> x);

}  // namespace edgerl
