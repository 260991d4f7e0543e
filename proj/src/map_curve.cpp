#include "edgerl/map_curve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>

#include "edgerl/errors.hpp"

namespace edgerl {

MapCurve::MapCurve() : MapCurve({4.5e-6, -4.7e-3, 1.6, -90.0}, 64.0, 416.0) {}

MapCurve::MapCurve(std::array<double, 4> coeffs, double domain_lo, double domain_hi)
    : coeffs_(coeffs), lo_(domain_lo), hi_(domain_hi) {
  if (!(domain_lo <= domain_hi)) throw DomainError("map curve domain must satisfy lo <= hi");
}

double MapCurve::raw(double p) const {
  return ((coeffs_[0] * p + coeffs_[1]) * p + coeffs_[2]) * p + coeffs_[3];
}

double MapCurve::score(double p) const {
  if (!(p >= lo_ && p <= hi_)) {
    std::ostringstream os;
    os << "resolution " << p << " outside mAP curve domain [" << lo_ << ", " << hi_ << "]";
    throw DomainError(os.str());
  }
  return std::clamp(raw(p), 0.0, 100.0);
}

double map_score(double p, const MapCurve& curve) { return curve.score(p); }

CurveFit fit_curve(std::span<const ResolutionMapPair> pairs, int degree) {
  if (degree != 3) throw FitError("only cubic fits are supported");
  std::set<double> distinct;
  for (const auto& pr : pairs) distinct.insert(pr.resolution);
  if (static_cast<int>(distinct.size()) < degree + 1) {
    throw FitError("cubic fit needs at least 4 distinct resolutions, got " +
                   std::to_string(distinct.size()));
  }

  // Columns are powers of p / scale so the Vandermonde matrix stays well
  // conditioned for p in the hundreds.
  const double scale = std::max(std::abs(*distinct.begin()), std::abs(*distinct.rbegin()));
  const auto rows = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd a(rows, degree + 1);
  Eigen::VectorXd y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double u = pairs[r].resolution / scale;
    double power = 1.0;
    for (int k = 0; k <= degree; ++k) {
      a(r, k) = power;
      power *= u;
    }
    y(r) = pairs[r].map;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < degree + 1) throw FitError("cubic fit is rank deficient");
  const Eigen::VectorXd scaled = qr.solve(y);

  std::array<double, 4> coeffs{};
  for (int k = 0; k <= degree; ++k) coeffs[degree - k] = scaled(k) / std::pow(scale, k);

  MapCurve curve(coeffs, *distinct.begin(), *distinct.rbegin());
  double sq = 0.0;
  for (const auto& pr : pairs) {
    const double e = curve.raw(pr.resolution) - pr.map;
    sq += e * e;
  }
  return {curve, std::sqrt(sq / static_cast<double>(pairs.size()))};
}

std::vector<ResolutionMapPair> read_map_pairs_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FitError("empty resolution/mAP CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "resolution_ppi,map") {
    throw FitError("expected CSV header 'resolution_ppi,map', got '" + line + "'");
  }
  std::vector<ResolutionMapPair> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument(line);
      out.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    } catch (const std::exception&) {
      throw FitError("malformed CSV row " + std::to_string(lineno) + ": '" + line + "'");
    }
  }
  return out;
}

std::vector<ResolutionMapPair> read_map_pairs_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FitError("cannot open '" + path.string() + "'");
  return read_map_pairs_csv(in);
}

void write_curve(const MapCurve& curve, std::ostream& out) {
  out << std::setprecision(17);
  for (double c : curve.coeffs()) out << c << '\n';
  out << "# domain " << curve.domain_lo() << ' ' << curve.domain_hi() << '\n';
}

void save_curve(const MapCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FitError("cannot write '" + path.string() + "'");
  write_curve(curve, out);
}

MapCurve read_curve(std::istream& in) {
  std::array<double, 4> coeffs{};
  int count = 0;
  double lo = 64.0;
  double hi = 416.0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream ls(line.substr(1));
      std::string tag;
      if (ls >> tag && tag == "domain") ls >> lo >> hi;
      continue;
    }
    if (count == 4) throw FitError("curve file has more than 4 coefficients");
    coeffs[count++] = std::stod(line);
  }
  if (count != 4) throw FitError("curve file must hold exactly 4 coefficients");
  return MapCurve(coeffs, lo, hi);
}

MapCurve load_curve(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FitError("cannot open '" + path.string() + "'");
  return read_curve(in);
}

}  // namespace edgerl
