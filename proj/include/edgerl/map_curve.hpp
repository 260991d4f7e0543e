#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace edgerl {

/// Cubic detection-quality model mAP(p) = c3 p^3 + c2 p^2 + c1 p + c0 on a
/// closed resolution domain, clamped to [0, 100].
class MapCurve {
 public:
  /// The empirical YOLOv4 patch-detection curve on [64, 416] ppi.
  MapCurve();
  MapCurve(std::array<double, 4> coeffs, double domain_lo, double domain_hi);

  /// Coefficients ordered highest power first: {c3, c2, c1, c0}.
  [[nodiscard]] const std::array<double, 4>& coeffs() const { return coeffs_; }
  [[nodiscard]] double domain_lo() const { return lo_; }
  [[nodiscard]] double domain_hi() const { return hi_; }

  /// Polynomial value without clamping. No domain check.
  [[nodiscard]] double raw(double p) const;

  /// Clamped score in [0, 100]; throws DomainError outside the domain.
  [[nodiscard]] double score(double p) const;

 private:
  std::array<double, 4> coeffs_;
  double lo_;
  double hi_;
};

/// mAP for resolution `p` under `curve` (the default curve when omitted).
double map_score(double p, const MapCurve& curve = MapCurve());

struct ResolutionMapPair {
  double resolution = 0.0;
  double map = 0.0;
};

struct CurveFit {
  MapCurve curve;
  double rms_residual = 0.0;
};

/// Ordinary least-squares cubic through (resolution, mAP) pairs. The fitted
/// curve's domain is the span of the input resolutions. Throws FitError with
/// fewer than four distinct resolutions.
CurveFit fit_curve(std::span<const ResolutionMapPair> pairs, int degree = 3);

/// Reads a CSV with header `resolution_ppi,map`.
std::vector<ResolutionMapPair> read_map_pairs_csv(const std::filesystem::path& path);
std::vector<ResolutionMapPair> read_map_pairs_csv(std::istream& in);

/// Four coefficient lines (c3..c0) followed by a `# domain lo hi` comment.
void write_curve(const MapCurve& curve, std::ostream& out);
void save_curve(const MapCurve& curve, const std::filesystem::path& path);
MapCurve load_curve(const std::filesystem::path& path);
MapCurve read_curve(std::istream& in);

}  // namespace edgerl
