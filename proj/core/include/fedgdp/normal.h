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

#ifndef FEDGDP_NORMAL_H_
#define FEDGDP_NORMAL_H_

namespace fedgdp {

// Standard normal density.
double NormalPdf(double x);

// Standard normal CDF, accurate to better than 1e-12 absolute for |x| <= 8.
double NormalCdf(double x);

// Standard normal quantile. Requires q in (0, 1). Satisfies
// |NormalCdf(NormalQuantile(q)) - q| <= 1e-10 for q in [1e-8, 1 - 1e-8].
double NormalQuantile(double q);

}  // namespace fedgdp

#endif  // FEDGDP_NORMAL_H_
