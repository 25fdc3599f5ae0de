// Copyright 2026 The fedgdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedgdp/tradeoff.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <utility>

#include "fedgdp/errors.h"
#include "fedgdp/normal.h"

namespace fedgdp {
namespace {

double Clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void ClampBetas(std::vector<double>& betas) {
  for (double& b : betas) b = Clamp01(b);
}

}  // namespace

TradeoffCurve::TradeoffCurve(std::vector<double> alphas,
                             std::vector<double> betas)
    : alphas_(std::move(alphas)), betas_(std::move(betas)) {
  if (alphas_.size() != betas_.size() || alphas_.size() < 2) {
    throw InvalidParameterError(
        "TradeoffCurve: alphas and betas must have equal size >= 2");
  }
  if (alphas_.front() != 0.0 || alphas_.back() != 1.0) {
    throw InvalidParameterError(
        "TradeoffCurve: alpha grid must span [0, 1] exactly");
  }
  for (std::size_t k = 0; k + 1 < alphas_.size(); ++k) {
    if (!(alphas_[k] < alphas_[k + 1])) {
      throw InvalidParameterError(
          "TradeoffCurve: alphas must be strictly increasing");
    }
  }
  for (double b : betas_) {
    if (!std::isfinite(b)) {
      throw InvalidParameterError("TradeoffCurve: betas must be finite");
    }
  }
}

TradeoffCurve TradeoffCurve::OnUniformGrid(std::vector<double> betas) {
  return TradeoffCurve(UniformAlphaGrid(static_cast<int>(betas.size())),
                       std::move(betas));
}

double TradeoffCurve::Value(double alpha) const {
  alpha = Clamp01(alpha);
  auto it = std::upper_bound(alphas_.begin(), alphas_.end(), alpha);
  if (it == alphas_.begin()) return betas_.front();
  if (it == alphas_.end()) return betas_.back();
  std::size_t hi = static_cast<std::size_t>(it - alphas_.begin());
  std::size_t lo = hi - 1;
  double t = (alpha - alphas_[lo]) / (alphas_[hi] - alphas_[lo]);
  return betas_[lo] + t * (betas_[hi] - betas_[lo]);
}

std::vector<double> UniformAlphaGrid(int grid_size) {
  if (grid_size < 2) {
    throw InvalidParameterError("UniformAlphaGrid: grid_size must be >= 2");
  }
  std::vector<double> alphas(grid_size);
  const double step = 1.0 / (grid_size - 1);
  for (int k = 0; k < grid_size; ++k) alphas[k] = k * step;
  alphas.front() = 0.0;
  alphas.back() = 1.0;
  return alphas;
}

GaussianGuarantee::GaussianGuarantee(double mu) : mu_(mu) {
  if (!(mu >= 0.0)) {
    throw InvalidParameterError("GaussianGuarantee: mu must be >= 0");
  }
}

TradeoffCurve GaussianGuarantee::ToCurve(int grid_size) const {
  return MakeGaussianCurve(mu_, grid_size);
}

TradeoffCurve IdentityCurve(int grid_size) {
  std::vector<double> alphas = UniformAlphaGrid(grid_size);
  std::vector<double> betas(alphas.size());
  for (std::size_t k = 0; k < alphas.size(); ++k) betas[k] = 1.0 - alphas[k];
  return TradeoffCurve(std::move(alphas), std::move(betas));
}

TradeoffCurve MakeGaussianCurve(double mu, int grid_size) {
  if (!(mu >= 0.0)) {
    throw InvalidParameterError("MakeGaussianCurve: mu must be >= 0");
  }
  std::vector<double> alphas = UniformAlphaGrid(grid_size);
  std::vector<double> betas(alphas.size());
  // The quantile diverges at the endpoints; the limit values are 1 and 0.
  betas.front() = 1.0;
  betas.back() = 0.0;
  for (std::size_t k = 1; k + 1 < alphas.size(); ++k) {
    betas[k] = Clamp01(NormalCdf(NormalQuantile(1.0 - alphas[k]) - mu));
  }
  return TradeoffCurve(std::move(alphas), std::move(betas));
}

TradeoffCurve InvertCurve(const TradeoffCurve& f) {
  const std::vector<double>& a = f.alphas();
  const std::vector<double>& b = f.betas();
  const std::size_t n = a.size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double target = a[k];
    // First knot with beta <= target; betas are non-increasing so the
    // predicate is monotone.
    auto it = std::partition_point(b.begin(), b.end(),
                                   [target](double v) { return v > target; });
    if (it == b.begin()) {
      out[k] = 0.0;
      continue;
    }
    if (it == b.end()) {
      // f stays above target everywhere; the infimum is over an empty set.
      out[k] = 1.0;
      continue;
    }
    std::size_t hi = static_cast<std::size_t>(it - b.begin());
    std::size_t lo = hi - 1;
    // b[lo] > target >= b[hi]: the crossing lies inside this segment and is
    // exact for the piecewise-linear interpolant. A later flat at the target
    // value cannot precede it, so this is the infimum.
    double t =
        a[lo] + (b[lo] - target) / (b[lo] - b[hi]) * (a[hi] - a[lo]);
    out[k] = Clamp01(t);
  }
  return TradeoffCurve(a, std::move(out));
}

TradeoffCurve Convexify(const TradeoffCurve& f) {
  const std::vector<double>& a = f.alphas();
  const std::vector<double>& b = f.betas();
  const std::size_t n = a.size();

  // Lower convex hull of the knot points, monotone-chain scan. Collinear
  // middle points are dropped.
  std::vector<std::size_t> hull;
  hull.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    while (hull.size() >= 2) {
      std::size_t i = hull[hull.size() - 2];
      std::size_t j = hull[hull.size() - 1];
      double cross = (a[j] - a[i]) * (b[k] - b[i]) -
                     (b[j] - b[i]) * (a[k] - a[i]);
      if (cross <= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(k);
  }

  // Resample the hull polyline back onto the grid.
  std::vector<double> out(n);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    while (seg + 1 < hull.size() - 1 && a[hull[seg + 1]] <= a[k]) ++seg;
    std::size_t i = hull[seg];
    std::size_t j = hull[seg + 1];
    if (a[k] <= a[i]) {
      out[k] = b[i];
    } else if (a[k] >= a[j]) {
      out[k] = b[j];
    } else {
      double t = (a[k] - a[i]) / (a[j] - a[i]);
      out[k] = b[i] + t * (b[j] - b[i]);
    }
  }
  return TradeoffCurve(a, std::move(out));
}

TradeoffCurve SubsampleOperator(const TradeoffCurve& f, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidParameterError("SubsampleOperator: p must lie in [0, 1]");
  }
  const std::vector<double>& a = f.alphas();
  const std::vector<double>& b = f.betas();
  std::vector<double> fp(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    fp[k] = p * b[k] + (1.0 - p) * (1.0 - a[k]);
  }
  TradeoffCurve mixed(a, std::move(fp));
  TradeoffCurve inverse = InvertCurve(mixed);
  std::vector<double> lower(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    lower[k] = Clamp01(std::min(mixed.betas()[k], inverse.betas()[k]));
  }
  return Convexify(TradeoffCurve(a, std::move(lower)));
}

TradeoffCurve MixtureLowerBound(const TradeoffCurve& f, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidParameterError("MixtureLowerBound: p must lie in [0, 1]");
  }
  const std::vector<double>& a = f.alphas();
  const std::vector<double>& b = f.betas();
  std::vector<double> out(a.size());
  const double p2 = p * p;
  for (std::size_t k = 0; k < a.size(); ++k) {
    out[k] = Clamp01(std::max(b[k], 1.0 - a[k] - p2));
  }
  // Max of a convex curve and an affine line is convex; the hull only mops
  // up grid-level wiggle.
  return Convexify(TradeoffCurve(a, std::move(out)));
}

bool CurveDominates(const TradeoffCurve& f, const TradeoffCurve& g,
                    double tol) {
  for (std::size_t k = 0; k < f.alphas().size(); ++k) {
    double alpha = f.alphas()[k];
    if (f.betas()[k] < g.Value(alpha) - tol) return false;
  }
  for (std::size_t k = 0; k < g.alphas().size(); ++k) {
    double alpha = g.alphas()[k];
    if (f.Value(alpha) < g.betas()[k] - tol) return false;
  }
  return true;
}

GaussianGuarantee GdpCompose(const std::vector<double>& mus) {
  double sum_sq = 0.0;
  for (double mu : mus) {
    if (!(mu >= 0.0)) {
      throw InvalidParameterError("GdpCompose: every mu must be >= 0");
    }
    sum_sq += mu * mu;
  }
  return GaussianGuarantee(std::sqrt(sum_sq));
}

GaussianGuarantee CltMu(double c, double sigma) {
  if (!(c > 0.0)) {
    throw InvalidParameterError("CltMu: c must be > 0");
  }
  if (!(sigma > 0.0)) {
    throw InvalidParameterError("CltMu: sigma must be > 0");
  }
  const double inv = 1.0 / sigma;
  double radicand = std::exp(inv * inv) * NormalCdf(1.5 * inv) +
                    3.0 * NormalCdf(-0.5 * inv) - 2.0;
  // The radicand tends to 0 from above as sigma grows; guard against
  // cancellation producing a tiny negative.
  radicand = std::max(radicand, 0.0);
  return GaussianGuarantee(std::sqrt(2.0) * c * std::sqrt(radicand));
}

CurveInvariantReport CheckTradeoffInvariants(const TradeoffCurve& f,
                                             double tol) {
  const std::vector<double>& a = f.alphas();
  const std::vector<double>& b = f.betas();
  CurveInvariantReport report;
  report.non_increasing = true;
  report.convex = true;
  report.dominated_by_id = true;
  report.in_range = true;
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (b[k] < -tol || b[k] > 1.0 + tol) report.in_range = false;
    if (b[k] > 1.0 - a[k] + tol) report.dominated_by_id = false;
    if (k + 1 < b.size() && b[k + 1] > b[k] + tol) {
      report.non_increasing = false;
    }
    if (k > 0 && k + 1 < b.size()) {
      // Uniform-grid midpoint test of discrete convexity.
      if (b[k] > 0.5 * (b[k - 1] + b[k + 1]) + tol) report.convex = false;
    }
  }
  return report;
}

namespace {
constexpr char kCurveHeader[] = "# tradeoff-curve v1";
}

void WriteCurveFile(const TradeoffCurve& f, std::ostream& out) {
  out << kCurveHeader << '\n';
  char line[64];
  for (int k = 0; k < f.size(); ++k) {
    std::snprintf(line, sizeof(line), "%.17g %.17g\n", f.alphas()[k],
                  f.betas()[k]);
    out << line;
  }
}

void WriteCurveFile(const TradeoffCurve& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("WriteCurveFile: cannot open " + path);
  }
  WriteCurveFile(f, out);
}

TradeoffCurve ReadCurveFile(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header != kCurveHeader) {
    throw ParseError("ReadCurveFile: missing '# tradeoff-curve v1' header");
  }
  std::vector<double> alphas;
  std::vector<double> betas;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double a = 0.0;
    double b = 0.0;
    if (!(row >> a >> b)) {
      throw ParseError("ReadCurveFile: malformed knot line '" + line + "'");
    }
    alphas.push_back(a);
    betas.push_back(b);
  }
  return TradeoffCurve(std::move(alphas), std::move(betas));
}

TradeoffCurve ReadCurveFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("ReadCurveFile: cannot open " + path);
  }
  return ReadCurveFile(in);
}

}  // namespace fedgdp
