#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "edgerl/errors.hpp"
#include "edgerl/map_curve.hpp"

using namespace edgerl;

namespace {

double paper_poly(double p) { return 4.5e-6 * p * p * p - 4.7e-3 * p * p + 1.6 * p - 90.0; }

}  // namespace

TEST_CASE("default curve values") {
  CHECK(map_score(416.0) == doctest::Approx(86.197632).epsilon(1e-12));
  CHECK(MapCurve().raw(64.0) == doctest::Approx(-5.671552).epsilon(1e-12));
  CHECK(std::abs(map_score(416.0) - 86.1976) < 1e-4);
  CHECK(std::abs(MapCurve().raw(64.0) + 5.6716) < 1e-4);
  CHECK(map_score(64.0) == 0.0);
  CHECK(map_score(240.0) == doctest::Approx(paper_poly(240.0)).epsilon(1e-14));
  CHECK_THROWS_AS(map_score(500.0), DomainError);
  CHECK_THROWS_AS(map_score(63.9), DomainError);
}

TEST_CASE("score is clamped to a percentage") {
  const MapCurve steep({0.0, 0.0, 1.0, 0.0}, 0.0, 500.0);
  CHECK(steep.score(250.0) == 100.0);
  CHECK(steep.score(40.0) == 40.0);
  for (double p = 64.0; p <= 416.0; p += 0.5) {
    const double s = map_score(p);
    CHECK(s >= 0.0);
    CHECK(s <= 100.0);
  }
}

TEST_CASE("fitting recovers exact cubics") {
  SUBCASE("four points of a known cubic") {
    const std::vector<ResolutionMapPair> pts{{1.0, 2.0 - 3.0 + 0.5 - 1.0},
                                             {2.0, 16.0 - 12.0 + 1.0 - 1.0},
                                             {3.0, 54.0 - 27.0 + 1.5 - 1.0},
                                             {5.0, 250.0 - 75.0 + 2.5 - 1.0}};
    const auto fit = fit_curve(pts);
    const auto& c = fit.curve.coeffs();
    CHECK(c[0] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(c[1] == doctest::Approx(-3.0).epsilon(1e-8));
    CHECK(c[2] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(c[3] == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(fit.rms_residual < 1e-9);
  }
  SUBCASE("the detection curve from five resolutions") {
    std::vector<ResolutionMapPair> pts;
    for (double p : {64.0, 150.0, 250.0, 350.0, 416.0}) pts.push_back({p, paper_poly(p)});
    const auto fit = fit_curve(pts);
    const auto& c = fit.curve.coeffs();
    CHECK(std::abs(c[0] - 4.5e-6) <= 1e-6);
    CHECK(std::abs(c[1] + 4.7e-3) <= 1e-6);
    CHECK(std::abs(c[2] - 1.6) <= 1e-6);
    CHECK(std::abs(c[3] + 90.0) <= 1e-6);
    CHECK(fit.curve.domain_lo() == 64.0);
    CHECK(fit.curve.domain_hi() == 416.0);
  }
}

TEST_CASE("underdetermined fits are rejected") {
  const std::vector<ResolutionMapPair> three{{64.0, 1.0}, {100.0, 2.0}, {200.0, 3.0}};
  CHECK_THROWS_AS(fit_curve(three), FitError);
  const std::vector<ResolutionMapPair> dup{{64.0, 1.0}, {64.0, 1.5}, {100.0, 2.0}, {200.0, 3.0}, {200.0, 3.1}};
  CHECK_THROWS_AS(fit_curve(dup), FitError);
}

TEST_CASE("residuals on the training points are bounded by the reported rms") {
  std::vector<ResolutionMapPair> pts;
  std::uint64_t x = 12345;
  for (int i = 0; i < 40; ++i) {
    x = x * 6364136223846793005ULL + 1442695040888963407ULL;
    const double noise = static_cast<double>(x >> 11) / 9007199254740992.0 - 0.5;
    const double p = 64.0 + 352.0 * i / 39.0;
    pts.push_back({p, paper_poly(p) + 3.0 * noise});
  }
  const auto fit = fit_curve(pts);
  double sq = 0.0;
  for (const auto& pt : pts) {
    const double r = fit.curve.raw(pt.resolution) - pt.map;
    sq += r * r;
  }
  CHECK(std::sqrt(sq / pts.size()) <= fit.rms_residual + 1e-12);
  CHECK(fit.rms_residual > 0.1);
}

TEST_CASE("curve files round-trip") {
  const MapCurve c({1.25e-6, -3e-3, 1.1, -70.5}, 80.0, 400.0);
  std::stringstream ss;
  write_curve(c, ss);
  const auto back = read_curve(ss);
  CHECK(back.coeffs() == c.coeffs());
  CHECK(back.domain_lo() == 80.0);
  CHECK(back.domain_hi() == 400.0);
}

TEST_CASE("pair csv requires its header") {
  std::istringstream good("resolution_ppi,map\n64,1.5\n128,20\n");
  const auto pts = read_map_pairs_csv(good);
  REQUIRE(pts.size() == 2);
  CHECK(pts[1].resolution == 128.0);
  CHECK(pts[1].map == 20.0);
  std::istringstream bad("p,map\n64,1.5\n");
  CHECK_THROWS(read_map_pairs_csv(bad));
}
