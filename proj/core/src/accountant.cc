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

#include "fedgdp/accountant.h"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "fedgdp/errors.h"

namespace fedgdp {

void ClientPrivacyParams::Validate() const {
  if (batch_size <= 0) {
    throw InvalidParameterError("ClientPrivacyParams: batch_size must be > 0");
  }
  if (dataset_size <= 0) {
    throw InvalidParameterError(
        "ClientPrivacyParams: dataset_size must be > 0");
  }
  if (batch_size > dataset_size) {
    throw InvalidParameterError(
        "ClientPrivacyParams: batch_size must be <= dataset_size");
  }
  if (!(noise_scale > 0.0)) {
    throw InvalidParameterError(
        "ClientPrivacyParams: noise_scale must be > 0");
  }
  if (!(clip_norm > 0.0)) {
    throw InvalidParameterError("ClientPrivacyParams: clip_norm must be > 0");
  }
  if (local_iters <= 0) {
    throw InvalidParameterError(
        "ClientPrivacyParams: local_iters must be > 0");
  }
  if (sync_rounds < 0) {
    throw InvalidParameterError(
        "ClientPrivacyParams: sync_rounds must be >= 0");
  }
  if (!(client_sampling_p >= 0.0 && client_sampling_p <= 1.0)) {
    throw InvalidParameterError(
        "ClientPrivacyParams: client_sampling_p must lie in [0, 1]");
  }
}

GaussianGuarantee PerClientMu(const ClientPrivacyParams& params) {
  params.Validate();
  if (params.sync_rounds == 0) {
    return GaussianGuarantee(0.0);  // zero rounds release nothing
  }
  const double c =
      (static_cast<double>(params.batch_size) / params.dataset_size) *
      std::sqrt(static_cast<double>(params.local_iters) * params.sync_rounds);
  return CltMu(c, params.noise_scale);
}

TradeoffCurve LocalRoundCurve(const ClientPrivacyParams& params,
                              int grid_size) {
  params.Validate();
  const double c =
      (static_cast<double>(params.batch_size) / params.dataset_size) *
      std::sqrt(static_cast<double>(params.local_iters));
  return CltMu(c, params.noise_scale).ToCurve(grid_size);
}

GaussianGuarantee WeakGuarantee(const std::vector<double>& per_client_mu) {
  if (per_client_mu.empty()) {
    throw InvalidParameterError(
        "WeakGuarantee: per_client_mu must be nonempty");
  }
  double mu_max = 0.0;
  for (double mu : per_client_mu) {
    if (!(mu >= 0.0)) {
      throw InvalidParameterError("WeakGuarantee: every mu must be >= 0");
    }
    mu_max = std::max(mu_max, mu);
  }
  return GaussianGuarantee(mu_max);
}

GaussianGuarantee StrongGuarantee(double mu_max, int num_clients) {
  if (num_clients < 2) {
    throw InvalidParameterError(
        "StrongGuarantee: num_clients must be >= 2 (no coalition exists "
        "otherwise)");
  }
  if (!(mu_max >= 0.0)) {
    throw InvalidParameterError("StrongGuarantee: mu_max must be >= 0");
  }
  return GaussianGuarantee(std::sqrt(num_clients - 1.0) * mu_max);
}

TradeoffCurve SingleRoundCurve(const TradeoffCurve& f, double p) {
  return MixtureLowerBound(f, p);
}

FederatedPrivacyReport MakePrivacyReport(
    const std::vector<ClientPrivacyParams>& clients, int curve_grid_size) {
  if (clients.empty()) {
    throw InvalidParameterError("MakePrivacyReport: clients must be nonempty");
  }
  std::vector<double> mus;
  mus.reserve(clients.size());
  std::vector<TradeoffCurve> curves;
  curves.reserve(clients.size());
  for (const ClientPrivacyParams& params : clients) {
    mus.push_back(PerClientMu(params).mu());
    curves.push_back(SingleRoundCurve(LocalRoundCurve(params, curve_grid_size),
                                      params.client_sampling_p));
  }
  GaussianGuarantee weak = WeakGuarantee(mus);
  std::optional<GaussianGuarantee> strong;
  std::string note =
      "weak/strong mu are central-limit asymptotics of the composed "
      "per-round mechanism, evaluated at the finite batch, iteration, and "
      "round counts; single_round_curves are exact finite-sample bounds.";
  if (clients.size() >= 2) {
    strong = StrongGuarantee(weak.mu(), static_cast<int>(clients.size()));
  } else {
    note += " strong guarantee omitted: a single-client federation has no "
            "adversary coalition.";
  }
  return FederatedPrivacyReport{clients,
                                std::move(mus),
                                weak.mu(),
                                weak,
                                strong,
                                std::move(curves),
                                std::move(note)};
}

nlohmann::json ReportToJson(const FederatedPrivacyReport& report,
                            const std::vector<std::string>& curve_paths) {
  nlohmann::json doc;
  doc["num_clients"] = report.clients.size();
  nlohmann::json clients = nlohmann::json::array();
  for (std::size_t i = 0; i < report.clients.size(); ++i) {
    const ClientPrivacyParams& params = report.clients[i];
    nlohmann::json entry{{"batch_size", params.batch_size},
                         {"dataset_size", params.dataset_size},
                         {"noise_scale", params.noise_scale},
                         {"clip_norm", params.clip_norm},
                         {"local_iters", params.local_iters},
                         {"sync_rounds", params.sync_rounds},
                         {"client_sampling_p", params.client_sampling_p},
                         {"mu", report.per_client_mu[i]}};
    if (i < curve_paths.size()) {
      entry["single_round_curve_file"] = curve_paths[i];
    }
    clients.push_back(std::move(entry));
  }
  doc["clients"] = std::move(clients);
  doc["mu_max"] = report.mu_max;
  doc["weak_mu"] = report.weak_guarantee.mu();
  if (report.strong_guarantee.has_value()) {
    doc["strong_mu"] = report.strong_guarantee->mu();
  } else {
    doc["strong_mu"] = nullptr;
  }
  doc["regime_note"] = report.regime_note;
  return doc;
}

}  // namespace fedgdp
