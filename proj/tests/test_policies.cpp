#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "edgerl/policies.hpp"
#include "edgerl/uplink_env.hpp"

using namespace edgerl;

namespace {

// Linear net with zero weights; the output equals the given biases.
Mlp bias_only(int in, const std::vector<double>& biases) {
  Mlp net({in, static_cast<int>(biases.size())});
  auto p = net.params();
  std::copy(biases.begin(), biases.end(), p.end() - static_cast<std::ptrdiff_t>(biases.size()));
  return net;
}

}  // namespace

TEST_CASE("allocation heads") {
  const std::vector<double> obs{0.3, -0.2};
  SUBCASE("uniform head") {
    const AllocPolicy pol(bias_only(2, {0.0, 0.0, 0.0, 0.0}), 1, 3);
    for (int a : {0, 1, 2, kIdle}) CHECK(pol.log_prob(obs, std::vector<int>{a}) == doctest::Approx(std::log(0.25)));
  }
  SUBCASE("dominant logit") {
    const AllocPolicy pol(bias_only(2, {10.0, -10.0, -10.0, -10.0}), 1, 3);
    CHECK(pol.probabilities(obs)[0] > 0.9999);
    CHECK(pol.greedy(obs) == std::vector<int>{0});
  }
  SUBCASE("idle is the last choice") {
    const AllocPolicy pol(bias_only(2, {-1.0, -1.0, 4.0}), 1, 2);
    CHECK(pol.greedy(obs) == std::vector<int>{kIdle});
  }
  SUBCASE("joint log-prob is the per-head sum") {
    const AllocPolicy pol(bias_only(2, {0.5, -0.3, 1.2, 0.1, -2.0, 0.7}), 2, 2);
    const auto p = pol.probabilities(obs);
    CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p[3] + p[4] + p[5] == doctest::Approx(1.0).epsilon(1e-12));
    const std::vector<int> a{1, kIdle};
    CHECK(pol.log_prob(obs, a) == doctest::Approx(std::log(p[1] * p[5])).epsilon(1e-12));
  }
  SUBCASE("sampled log-prob matches the density") {
    const AllocPolicy pol(5, 3, 3, {8}, 4);
    std::vector<double> o(5, 0.1);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
      const auto s = pol.sample(o, rng);
      CHECK(s.log_prob == doctest::Approx(pol.log_prob(o, s.alloc)).epsilon(1e-12));
    }
  }
}

TEST_CASE("sampling frequencies follow the head probabilities") {
  const AllocPolicy pol(bias_only(1, {std::log(0.5), std::log(0.3), std::log(0.2)}), 1, 2);
  std::mt19937_64 rng(5);
  std::vector<int> counts(3, 0);
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    const int a = pol.sample(std::vector<double>{0.0}, rng).alloc[0];
    ++counts[a == kIdle ? 2 : a];
  }
  CHECK(counts[0] / double(n) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(counts[1] / double(n) == doctest::Approx(0.3).epsilon(0.02));
  CHECK(counts[2] / double(n) == doctest::Approx(0.2).epsilon(0.02));
}

TEST_CASE("resolution actor") {
  SUBCASE("standard normal at zero") {
    const ResolPolicy pol(bias_only(2, {0.0}), {0.0}, 64.0, 416.0);
    CHECK(pol.log_prob(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0}) ==
          doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-14));
    CHECK(pol.log_prob(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0}) == doctest::Approx(-0.9189).epsilon(1e-4));
    CHECK(pol.deterministic(std::vector<double>{1.0, 2.0})[0] == doctest::Approx(240.0));
  }
  SUBCASE("saturation respects the bounds") {
    const ResolPolicy pol(bias_only(1, {0.0}), {0.0}, 64.0, 416.0);
    CHECK(pol.squash(50.0) == 416.0);
    CHECK(pol.squash(-50.0) == 64.0);
    CHECK(pol.squash(1e308) <= 416.0);
  }
  SUBCASE("diagonal dims add up") {
    const ResolPolicy pol(bias_only(1, {0.2, -0.4, 1.0}), {0.0, -1.0, 0.5}, 64.0, 416.0);
    const std::vector<double> z{0.1, 0.3, -0.7};
    double want = 0.0;
    const std::vector<double> mu{0.2, -0.4, 1.0};
    const std::vector<double> ls{0.0, -1.0, 0.5};
    for (int d = 0; d < 3; ++d) {
      const double u = (z[d] - mu[d]) / std::exp(ls[d]);
      want += -0.5 * u * u - ls[d] - 0.5 * std::log(2.0 * std::numbers::pi);
    }
    CHECK(pol.log_prob(std::vector<double>{0.0}, z) == doctest::Approx(want).epsilon(1e-12));
  }
  SUBCASE("samples are legal and self-consistent") {
    const ResolPolicy pol(4, 3, 64.0, 416.0, {8}, 2, 1.5);
    std::mt19937_64 rng(9);
    const std::vector<double> obs{0.1, 0.2, 0.3, 0.4};
    for (int i = 0; i < 200; ++i) {
      const auto s = pol.sample(obs, rng);
      for (int d = 0; d < 3; ++d) {
        CHECK(s.resolution[d] >= 64.0);
        CHECK(s.resolution[d] <= 416.0);
        CHECK(s.resolution[d] == pol.squash(s.pre_squash[d]));
      }
      CHECK(s.log_prob == pol.log_prob(obs, s.pre_squash));
    }
  }
  SUBCASE("log-std clamp") {
    ResolPolicy pol(bias_only(1, {0.0, 0.0}), {-9.0, 4.0}, 64.0, 416.0);
    pol.clamp_log_std();
    CHECK(pol.log_std() == std::vector<double>{-5.0, 2.0});
  }
}

TEST_CASE("policy gradients match finite differences") {
  const std::vector<double> obs{0.4, -0.6, 1.1};
  const double h = 1e-6;
  SUBCASE("allocation") {
    AllocPolicy pol(3, 2, 2, {4}, 17);
    // Sharper logits than the 0.01-scaled init so the check is not trivially small.
    for (auto& w : pol.net().params()) w *= 30.0;
    const std::vector<int> a{1, kIdle};
    std::vector<double> grad(pol.net().parameter_count(), 0.0);
    ForwardCache cache;
    pol.accumulate_gradient(obs, a, 1.7, 0.3, grad, cache);
    auto entropy = [&](const AllocPolicy& p) {
      const auto pr = p.probabilities(obs);
      double e = 0.0;
      for (double x : pr) e -= x * std::log(x);
      return e;
    };
    for (std::size_t k = 0; k < grad.size(); ++k) {
      auto& w = pol.net().params()[k];
      const double keep = w;
      w = keep + h;
      const double fp = 1.7 * pol.log_prob(obs, a) + 0.3 * entropy(pol);
      w = keep - h;
      const double fm = 1.7 * pol.log_prob(obs, a) + 0.3 * entropy(pol);
      w = keep;
      const double fd = (fp - fm) / (2 * h);
      CHECK(std::abs(fd - grad[k]) <= 1e-4 * std::max(1.0, std::abs(fd)));
    }
  }
  SUBCASE("resolution") {
    ResolPolicy pol(3, 2, 64.0, 416.0, {4}, 23, -0.3);
    const std::vector<double> z{0.5, -1.2};
    std::vector<double> net_grad(pol.net().parameter_count(), 0.0);
    std::vector<double> ls_grad(2, 0.0);
    ForwardCache cache;
    pol.accumulate_gradient(obs, z, -0.8, 0.2, net_grad, ls_grad, cache);
    auto f = [&] {
      double ent = 0.0;
      for (double l : pol.log_std()) ent += l;  // entropy up to a constant
      return -0.8 * pol.log_prob(obs, z) + 0.2 * ent;
    };
    for (std::size_t k = 0; k < net_grad.size(); ++k) {
      auto& w = pol.net().params()[k];
      const double keep = w;
      w = keep + h;
      const double fp = f();
      w = keep - h;
      const double fm = f();
      w = keep;
      const double fd = (fp - fm) / (2 * h);
      CHECK(std::abs(fd - net_grad[k]) <= 1e-4 * std::max(1.0, std::abs(fd)));
    }
    for (std::size_t d = 0; d < 2; ++d) {
      auto& l = pol.log_std()[d];
      const double keep = l;
      l = keep + h;
      const double fp = f();
      l = keep - h;
      const double fm = f();
      l = keep;
      const double fd = (fp - fm) / (2 * h);
      CHECK(std::abs(fd - ls_grad[d]) <= 1e-4 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("critic target copy") {
  Critic c(3, {4}, 6);
  const std::vector<double> obs{1.0, 0.0, -1.0};
  CHECK(c.value(obs) == c.target_value(obs));
  c.net().params()[0] += 0.5;
  CHECK(c.value(obs) != c.target_value(obs));
  c.sync_target();
  CHECK(c.value(obs) == c.target_value(obs));
}
