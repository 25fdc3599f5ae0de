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
// Privacy accountant for the synchronized federation: translates per-client
// training parameters into weak (per-pair) and strong (coalition) federated
// Gaussian privacy guarantees, plus exact single-round trade-off curves.

#ifndef FEDGDP_ACCOUNTANT_H_
#define FEDGDP_ACCOUNTANT_H_

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fedgdp/tradeoff.h"

namespace fedgdp {

// Parameters of one client's private local training across the whole run.
struct ClientPrivacyParams {
  int batch_size = 0;              // expected minibatch size B
  int dataset_size = 0;            // local training examples n
  double noise_scale = 0.0;        // sigma, relative noise multiplier
  double clip_norm = 1.0;          // per-sample gradient clip C
  int local_iters = 0;             // iterations K per sync round
  int sync_rounds = 0;             // sync rounds R
  double client_sampling_p = 1.0;  // Poisson client-sampling rate p

  // Throws InvalidParameterError naming the offending field. Requires all
  // counts and scales strictly positive (sync_rounds may be zero),
  // batch_size <= dataset_size, and client_sampling_p in [0,1].
  void Validate() const;
};

// Central-limit Gaussian parameter of one client's full participation:
// c = (B/n) * sqrt(K * R), then the composed-subsampled-mechanism formula
// of CltMu(c, sigma). The limit formula is evaluated at the finite sample
// sizes, which is how the published operating points are computed. A run
// with zero sync rounds releases nothing and gets mu = 0 exactly.
GaussianGuarantee PerClientMu(const ClientPrivacyParams& params);

// Trade-off curve of a single sync round's local training (K iterations,
// no client sampling): the Gaussian curve at CltMu((B/n) * sqrt(K), sigma).
TradeoffCurve LocalRoundCurve(const ClientPrivacyParams& params,
                              int grid_size = kDefaultGridSize);

// Weak federated guarantee: G_{mu_max} with mu_max the largest per-client
// mu. Requires a nonempty list of nonnegative values.
GaussianGuarantee WeakGuarantee(const std::vector<double>& per_client_mu);

// Strong federated guarantee against the coalition of all other clients:
// sqrt(m - 1) * mu_max. Requires num_clients >= 2 (otherwise no coalition
// exists) and mu_max >= 0.
GaussianGuarantee StrongGuarantee(double mu_max, int num_clients);

// One-round cross-client factor: the mixture bound max(f, 1 - alpha - p^2)
// where p is the client-sampling rate and f the local round curve.
TradeoffCurve SingleRoundCurve(const TradeoffCurve& f, double p);

// Full accounting output for a federation.
struct FederatedPrivacyReport {
  std::vector<ClientPrivacyParams> clients;
  std::vector<double> per_client_mu;
  double mu_max = 0.0;
  GaussianGuarantee weak_guarantee;
  // Absent for a single-client federation (no coalition exists).
  std::optional<GaussianGuarantee> strong_guarantee;
  // One exact single-round curve per client.
  std::vector<TradeoffCurve> single_round_curves;
  // Flags the weak/strong values as central-limit asymptotics.
  std::string regime_note;
};

// Builds the report for a nonempty federation; validates every entry.
FederatedPrivacyReport MakePrivacyReport(
    const std::vector<ClientPrivacyParams>& clients,
    int curve_grid_size = kDefaultGridSize);

// Flat JSON document: parameters echoed per client with mu, weak/strong mu
// (strong is null when absent), the regime note, and optional paths of
// exported curve files.
nlohmann::json ReportToJson(const FederatedPrivacyReport& report,
                            const std::vector<std::string>& curve_paths = {});

}  // namespace fedgdp

#endif  // FEDGDP_ACCOUNTANT_H_
