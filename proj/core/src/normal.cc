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

#include "fedgdp/normal.h"

#include <cmath>
#include <numbers>

#include "fedgdp/errors.h"

namespace fedgdp {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi =
    std::numbers::inv_sqrtpi_v<double> * 0.70710678118654752440;

// Rational initial guess for the quantile (Acklam), good to ~1e-9 relative.
// Two Newton corrections against the erfc-based CDF bring it to full double
// precision away from the extreme tails.
double QuantileInitialGuess(double q) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  constexpr double p_high = 1.0 - p_low;

  if (q < p_low) {
    double u = std::sqrt(-2.0 * std::log(q));
    return (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u +
            c[5]) /
           ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  }
  if (q <= p_high) {
    double u = q - 0.5;
    double r = u * u;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
            a[5]) *
           u /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  double u = std::sqrt(-2.0 * std::log1p(-q));
  return -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u +
           c[5]) /
         ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
}

}  // namespace

double NormalPdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double NormalCdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double NormalQuantile(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw InvalidParameterError("NormalQuantile: q must lie in (0, 1)");
  }
  double x = QuantileInitialGuess(q);
  for (int i = 0; i < 2; ++i) {
    double density = NormalPdf(x);
    if (density <= 0.0) break;
    x -= (NormalCdf(x) - q) / density;
  }
  return x;
}

}  // namespace fedgdp
