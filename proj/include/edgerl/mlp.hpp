#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace edgerl {

/// Activations of one forward pass, kept for the matching backward pass.
struct ForwardCache {
  std::vector<std::vector<double>> activations;  // input, then each layer's output
};

/// Fully connected network: tanh on hidden layers, identity on the output.
///
/// Parameters live in one flat vector. Layer l contributes an out x in
/// row-major weight block followed by its out biases, so the parameter count
/// is sum over layers of (in + 1) * out.
class Mlp {
 public:
  Mlp() = default;
  /// All parameters zero.
  explicit Mlp(std::vector<int> layer_sizes);

  /// Uniform init in [-1/sqrt(fan_in), 1/sqrt(fan_in)]; the last layer's
  /// weights and biases are multiplied by `output_scale`.
  static Mlp initialized(std::vector<int> layer_sizes, std::uint64_t seed, double output_scale = 1.0);

  [[nodiscard]] const std::vector<int>& layer_sizes() const { return sizes_; }
  [[nodiscard]] int input_size() const { return sizes_.front(); }
  [[nodiscard]] int output_size() const { return sizes_.back(); }
  [[nodiscard]] std::size_t parameter_count() const { return params_.size(); }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }

  [[nodiscard]] std::span<double> params() { return params_; }
  [[nodiscard]] std::span<const double> params() const { return params_; }

  [[nodiscard]] std::vector<double> forward(std::span<const double> x) const;
  /// Forward pass that records activations; returns the output layer.
  std::span<const double> forward(std::span<const double> x, ForwardCache& cache) const;

  /// Adds d(upstream . forward(x)) / d(params) into `grad`.
  void accumulate_gradient(const ForwardCache& cache, std::span<const double> upstream,
                           std::span<double> grad) const;

  /// Gradient of upstream . forward(x) with respect to all parameters.
  [[nodiscard]] std::vector<double> backward(std::span<const double> x, std::span<const double> upstream) const;

  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static Mlp load(std::istream& in);
  static Mlp load(const std::filesystem::path& path);

 private:
  std::vector<int> sizes_;
  std::vector<double> params_;
  std::vector<std::size_t> offsets_;  // start of each layer's weight block
  std::uint64_t seed_ = 0;
};

/// Writes a little-endian float64 parameter array after a short text header.
void save_parameters(std::ostream& out, std::span<const double> values, const std::vector<int>& layer_sizes,
                     std::uint64_t seed);
/// Reads what save_parameters wrote.
std::vector<double> load_parameters(std::istream& in, std::vector<int>& layer_sizes, std::uint64_t& seed);

struct AdamOptions {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Bias-corrected Adam; `step` descends along `grads`.
class Adam {
 public:
  Adam() = default;
  Adam(std::size_t size, AdamOptions options);

  void step(std::span<double> params, std::span<const double> grads);

  [[nodiscard]] long long steps() const { return t_; }
  [[nodiscard]] const AdamOptions& options() const { return options_; }
  [[nodiscard]] const std::vector<double>& first_moment() const { return m_; }
  [[nodiscard]] const std::vector<double>& second_moment() const { return v_; }

 private:
  AdamOptions options_;
  std::vector<double> m_;
  std::vector<double> v_;
  long long t_ = 0;
};

}  // namespace edgerl
