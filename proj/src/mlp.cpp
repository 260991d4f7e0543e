#include "edgerl/mlp.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "edgerl/errors.hpp"

namespace edgerl {
namespace {

void check_sizes(const std::vector<int>& sizes) {
  if (sizes.size() < 2) throw DimensionError("an MLP needs at least an input and an output width");
  for (int s : sizes) {
    if (s < 1) throw DimensionError("MLP layer widths must be positive");
  }
}

}  // namespace

Mlp::Mlp(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  check_sizes(sizes_);
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += static_cast<std::size_t>(sizes_[l] + 1) * sizes_[l + 1];
  }
  params_.assign(total, 0.0);
}

Mlp Mlp::initialized(std::vector<int> layer_sizes, std::uint64_t seed, double output_scale) {
  Mlp net(std::move(layer_sizes));
  net.seed_ = seed;
  std::mt19937_64 rng(seed);
  const std::size_t layers = net.sizes_.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const int in = net.sizes_[l];
    const int out = net.sizes_[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    const double scale = l + 1 == layers ? output_scale : 1.0;
    std::uniform_real_distribution<double> dist(-bound, bound);
    const std::size_t count = static_cast<std::size_t>(in + 1) * out;
    for (std::size_t k = 0; k < count; ++k) net.params_[net.offsets_[l] + k] = scale * dist(rng);
  }
  return net;
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
  ForwardCache cache;
  const auto out = forward(x, cache);
  return {out.begin(), out.end()};
}

std::span<const double> Mlp::forward(std::span<const double> x, ForwardCache& cache) const {
  if (static_cast<int>(x.size()) != input_size()) {
    throw DimensionError("MLP input has width " + std::to_string(x.size()) + ", expected " +
                         std::to_string(input_size()));
  }
  const std::size_t layers = sizes_.size() - 1;
  cache.activations.resize(layers + 1);
  cache.activations[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < layers; ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double* w = params_.data() + offsets_[l];
    const double* b = w + static_cast<std::size_t>(in) * out;
    const auto& a = cache.activations[l];
    auto& z = cache.activations[l + 1];
    z.resize(out);
    const bool hidden = l + 1 < layers;
    for (int o = 0; o < out; ++o) {
      const double* row = w + static_cast<std::size_t>(o) * in;
      double acc = b[o];
      for (int k = 0; k < in; ++k) acc += row[k] * a[k];
      z[o] = hidden ? std::tanh(acc) : acc;
    }
  }
  return cache.activations.back();
}

void Mlp::accumulate_gradient(const ForwardCache& cache, std::span<const double> upstream,
                              std::span<double> grad) const {
  if (static_cast<int>(upstream.size()) != output_size()) {
    throw DimensionError("upstream gradient width does not match the MLP output");
  }
  if (grad.size() != params_.size()) throw DimensionError("gradient buffer does not match parameter count");
  const std::size_t layers = sizes_.size() - 1;
  std::vector<double> delta(upstream.begin(), upstream.end());
  std::vector<double> prev;
  for (std::size_t l = layers; l-- > 0;) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double* w = params_.data() + offsets_[l];
    double* gw = grad.data() + offsets_[l];
    double* gb = gw + static_cast<std::size_t>(in) * out;
    const auto& a = cache.activations[l];
    for (int o = 0; o < out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      double* grow = gw + static_cast<std::size_t>(o) * in;
      for (int k = 0; k < in; ++k) grow[k] += d * a[k];
      gb[o] += d;
    }
    if (l == 0) break;
    // Propagate through the weights, then through tanh of layer l's output.
    prev.assign(in, 0.0);
    for (int o = 0; o < out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      const double* row = w + static_cast<std::size_t>(o) * in;
      for (int k = 0; k < in; ++k) prev[k] += row[k] * d;
    }
    for (int k = 0; k < in; ++k) prev[k] *= 1.0 - a[k] * a[k];
    delta.swap(prev);
  }
}

std::vector<double> Mlp::backward(std::span<const double> x, std::span<const double> upstream) const {
  ForwardCache cache;
  forward(x, cache);
  std::vector<double> grad(params_.size(), 0.0);
  accumulate_gradient(cache, upstream, grad);
  return grad;
}

void save_parameters(std::ostream& out, std::span<const double> values, const std::vector<int>& layer_sizes,
                     std::uint64_t seed) {
  out << "edgerl-params 1\nlayers";
  for (int s : layer_sizes) out << ' ' << s;
  out << "\nseed " << seed << "\ncount " << values.size() << "\ndata\n";
  for (double v : values) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    char bytes[8];
    for (int k = 0; k < 8; ++k) {
      bytes[k] = static_cast<char>(bits & 0xffU);
      bits >>= 8;
    }
    out.write(bytes, 8);
  }
  if (!out) throw std::runtime_error("failed to write parameter file");
}

std::vector<double> load_parameters(std::istream& in, std::vector<int>& layer_sizes, std::uint64_t& seed) {
  auto fail = [](const std::string& what) { return std::runtime_error("bad parameter file: " + what); };
  std::string line;
  if (!std::getline(in, line) || line != "edgerl-params 1") throw fail("missing magic line");
  std::size_t count = 0;
  layer_sizes.clear();
  seed = 0;
  while (std::getline(in, line) && line != "data") {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "layers") {
      int s;
      while (ls >> s) layer_sizes.push_back(s);
    } else if (key == "seed") {
      ls >> seed;
    } else if (key == "count") {
      ls >> count;
    } else {
      throw fail("unknown header key '" + key + "'");
    }
  }
  if (line != "data") throw fail("missing data marker");
  std::vector<double> values(count);
  for (auto& v : values) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw fail("truncated data");
    std::uint64_t bits = 0;
    for (int k = 7; k >= 0; --k) bits = (bits << 8) | bytes[k];
    v = std::bit_cast<double>(bits);
  }
  return values;
}

void Mlp::save(std::ostream& out) const { save_parameters(out, params_, sizes_, seed_); }

void Mlp::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  save(out);
}

Mlp Mlp::load(std::istream& in) {
  std::vector<int> sizes;
  std::uint64_t seed = 0;
  auto values = load_parameters(in, sizes, seed);
  Mlp net(sizes);
  if (values.size() != net.params_.size()) throw DimensionError("parameter count does not match layer sizes");
  net.params_ = std::move(values);
  net.seed_ = seed;
  return net;
}

Mlp Mlp::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return load(in);
}

Adam::Adam(std::size_t size, AdamOptions options) : options_(options), m_(size, 0.0), v_(size, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw DimensionError("Adam step: parameter, gradient and moment lengths differ");
  }
  ++t_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grads[k];
    m_[k] = b1 * m_[k] + (1.0 - b1) * g;
    v_[k] = b2 * v_[k] + (1.0 - b2) * g * g;
    params[k] -= options_.learning_rate * (m_[k] / c1) / (std::sqrt(v_[k] / c2) + options_.epsilon);
  }
}

}  // namespace edgerl
