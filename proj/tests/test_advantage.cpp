#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "edgerl/advantage.hpp"
#include "edgerl/errors.hpp"

using namespace edgerl;

namespace {

std::vector<double> brute_force(const std::vector<double>& r, const std::vector<double>& v, double gamma,
                                double lambda) {
  const std::size_t n = r.size();
  std::vector<double> a(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t k = 0; t + k < n; ++k) {
      const double delta = r[t + k] + gamma * v[t + k + 1] - v[t + k];
      a[t] += std::pow(gamma * lambda, static_cast<double>(k)) * delta;
    }
  }
  return a;
}

}  // namespace

TEST_CASE("hand examples") {
  const auto a = gae(std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, 0.0, 0.0}, 1.0, 1.0);
  CHECK(a == std::vector<double>{2.0, 1.0});

  const std::vector<double> r{0.5, -1.0, 2.0};
  const std::vector<double> v{0.1, 0.2, -0.3, 0.4};
  const auto one_step = gae(r, v, 0.9, 0.0);
  for (int t = 0; t < 3; ++t) CHECK(one_step[t] == doctest::Approx(r[t] + 0.9 * v[t + 1] - v[t]));
}

TEST_CASE("matches the double sum on random segments") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 5.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> r(10);
    std::vector<double> v(11);
    for (auto& x : r) x = n(rng);
    for (auto& x : v) x = n(rng);
    const double gamma = u(rng);
    const double lambda = u(rng);
    const auto got = gae(r, v, gamma, lambda);
    const auto want = brute_force(r, v, gamma, lambda);
    for (int t = 0; t < 10; ++t) CHECK(std::abs(got[t] - want[t]) <= 1e-10);
  }
}

TEST_CASE("episode cuts split the trace") {
  const std::vector<double> r{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> v{0.5, 0.25, 1.0, -0.5};
  const std::vector<double> next{0.25, 0.75, -0.5, 2.0};  // state after step 1 is a fresh reset
  const std::vector<unsigned char> cut{0, 1, 0, 1};
  const auto a = gae(r, v, next, cut, 0.9, 0.8);

  const auto first = brute_force({1.0, 2.0}, {0.5, 0.25, 0.75}, 0.9, 0.8);
  const auto second = brute_force({3.0, 4.0}, {1.0, -0.5, 2.0}, 0.9, 0.8);
  CHECK(a[0] == doctest::Approx(first[0]).epsilon(1e-14));
  CHECK(a[1] == doctest::Approx(first[1]).epsilon(1e-14));
  CHECK(a[2] == doctest::Approx(second[0]).epsilon(1e-14));
  CHECK(a[3] == doctest::Approx(second[1]).epsilon(1e-14));
}

TEST_CASE("length checks") {
  CHECK_THROWS_AS(gae(std::vector<double>{1.0}, std::vector<double>{0.0}, 0.9, 0.9), DimensionError);
}

TEST_CASE("standardize") {
  const auto z = standardize(std::vector<double>{1.0, 2.0, 3.0, 4.0});
  double mean = 0.0;
  double sq = 0.0;
  for (double x : z) mean += x / 4.0;
  for (double x : z) sq += (x - mean) * (x - mean) / 4.0;
  CHECK(std::abs(mean) < 1e-12);
  CHECK(std::sqrt(sq) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(standardize(std::vector<double>{5.0, 5.0}) == std::vector<double>{0.0, 0.0});
}
