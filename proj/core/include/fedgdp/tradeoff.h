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
//
// Numerical algebra of trade-off functions. A trade-off function maps a
// type-I error level alpha in [0,1] to the smallest achievable type-II error
// of any test distinguishing the two output distributions of a mechanism;
// larger curves mean more privacy. Curves are represented on a discrete
// alpha grid with linear interpolation between knots, which makes every
// operator used here (affine mixing, pointwise min/max, inversion, convex
// hull) exact on the piecewise-linear representation.

#ifndef FEDGDP_TRADEOFF_H_
#define FEDGDP_TRADEOFF_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace fedgdp {

// Default knot count for curves on [0,1]. A uniform grid of this size keeps
// every operator below 1e-4 sup-norm error for the parameter ranges the
// accountant produces.
inline constexpr int kDefaultGridSize = 10001;

// A discretized trade-off function beta = f(alpha) on [0,1].
//
// Knots are (alphas[k], betas[k]) with alphas strictly increasing from 0 to
// 1; evaluation between knots is linear interpolation. Valid curves are
// non-increasing, convex, and dominated by the perfect-privacy line
// Id(alpha) = 1 - alpha; construction does not force those properties (some
// operators need intermediate curves that lack them) but
// CheckTradeoffInvariants verifies them.
class TradeoffCurve {
 public:
  // Takes ownership of the knot vectors. Requires equal sizes >= 2, alphas
  // strictly increasing with alphas.front() == 0 and alphas.back() == 1, and
  // finite betas.
  TradeoffCurve(std::vector<double> alphas, std::vector<double> betas);

  // Curve on the uniform grid {k/(n-1)}.
  static TradeoffCurve OnUniformGrid(std::vector<double> betas);

  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<double>& betas() const { return betas_; }
  int size() const { return static_cast<int>(alphas_.size()); }

  // Piecewise-linear evaluation; alpha is clamped to [0,1].
  double Value(double alpha) const;

 private:
  std::vector<double> alphas_;
  std::vector<double> betas_;
};

// The uniform grid {k/(n-1) : k = 0..n-1}. Requires grid_size >= 2.
std::vector<double> UniformAlphaGrid(int grid_size);

// A Gaussian privacy guarantee: the parameter mu >= 0 identifying the curve
// for testing N(0,1) against N(mu,1). mu = 0 is perfect privacy.
class GaussianGuarantee {
 public:
  explicit GaussianGuarantee(double mu);
  double mu() const { return mu_; }
  TradeoffCurve ToCurve(int grid_size = kDefaultGridSize) const;

 private:
  double mu_;
};

// The perfect-privacy curve Id(alpha) = 1 - alpha, exact at every knot.
TradeoffCurve IdentityCurve(int grid_size = kDefaultGridSize);

// The Gaussian curve G_mu(alpha) = Phi(Phi^{-1}(1 - alpha) - mu) with
// endpoint values beta(0) = 1 and beta(1) = 0. Requires mu >= 0.
TradeoffCurve MakeGaussianCurve(double mu, int grid_size = kDefaultGridSize);

// The generalized inverse f^{-1}(alpha) = inf{t in [0,1] : f(t) <= alpha},
// evaluated on f's grid. On flat segments the infimum picks the left
// endpoint. Requires f non-increasing.
TradeoffCurve InvertCurve(const TradeoffCurve& f);

// Greatest convex minorant of the knot set (the double conjugate f**):
// the lower convex hull of the (alpha, beta) points, resampled to f's grid.
TradeoffCurve Convexify(const TradeoffCurve& f);

// Privacy amplification by Poisson subsampling at rate p:
//   C_p(f) = min{f_p, f_p^{-1}}**   with   f_p = p f + (1 - p) Id.
// The result is symmetric (equals its own inverse) up to grid error.
// Requires p in [0,1].
TradeoffCurve SubsampleOperator(const TradeoffCurve& f, double p);

// One-round guarantee for a mechanism that only touches the sensitive data
// when two independently p-sampled parties are both selected:
//   g_p(alpha) = max{f(alpha), 1 - alpha - p^2}, clamped to [0,1].
// Requires p in [0,1].
TradeoffCurve MixtureLowerBound(const TradeoffCurve& f, double p);

// True iff f(alpha) >= g(alpha) - tol at every knot of either curve.
bool CurveDominates(const TradeoffCurve& f, const TradeoffCurve& g,
                    double tol = 1e-9);

// Composition of Gaussian guarantees: sqrt(mu_1^2 + ... + mu_n^2).
// Requires every entry >= 0.
GaussianGuarantee GdpCompose(const std::vector<double>& mus);

// Central-limit Gaussian parameter of the composed subsampled noisy-gradient
// mechanism with effective sampling constant c and noise scale sigma:
//   mu = sqrt(2) c sqrt(exp(sigma^-2) Phi(1.5/sigma) + 3 Phi(-0.5/sigma) - 2).
// Requires c > 0 and sigma > 0.
GaussianGuarantee CltMu(double c, double sigma);

// Diagnostics for the curve invariants at tolerance tol: non-increasing,
// discretely convex, dominated by Id, values in [0,1].
struct CurveInvariantReport {
  bool non_increasing = false;
  bool convex = false;
  bool dominated_by_id = false;
  bool in_range = false;
  bool ok() const {
    return non_increasing && convex && dominated_by_id && in_range;
  }
};
CurveInvariantReport CheckTradeoffInvariants(const TradeoffCurve& f,
                                             double tol);

// Curve file format: header line "# tradeoff-curve v1" followed by one
// "alpha beta" pair per knot, full grid, text floats.
void WriteCurveFile(const TradeoffCurve& f, std::ostream& out);
void WriteCurveFile(const TradeoffCurve& f, const std::string& path);
TradeoffCurve ReadCurveFile(std::istream& in);
TradeoffCurve ReadCurveFile(const std::string& path);

}  // namespace fedgdp

#endif  // FEDGDP_TRADEOFF_H_
