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

#include "fedgdp/harness.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fedgdp/errors.h"
#include "fedgdp/partition.h"
#include "fedgdp/tradeoff.h"

namespace fedgdp {
namespace {

namespace fs = std::filesystem;

void EnsureDirectory(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) {
    throw ParseError("cannot create output directory " + path + ": " +
                     ec.message());
  }
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open " + path + " for writing");
  }
  out << text;
  if (!out.good()) {
    throw ParseError("failed writing " + path);
  }
}

// Number of items in an idx label file, from the 8-byte header alone.
int ReadIdxLabelCount(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open idx label file " + path);
  }
  unsigned char header[8];
  if (!in.read(reinterpret_cast<char*>(header), sizeof(header))) {
    throw ParseError("truncated idx label header in " + path);
  }
  const uint32_t magic = (static_cast<uint32_t>(header[0]) << 24) |
                         (static_cast<uint32_t>(header[1]) << 16) |
                         (static_cast<uint32_t>(header[2]) << 8) |
                         static_cast<uint32_t>(header[3]);
  if (magic != 0x00000801u) {
    throw ParseError("bad label magic in " + path);
  }
  const uint32_t count = (static_cast<uint32_t>(header[4]) << 24) |
                         (static_cast<uint32_t>(header[5]) << 16) |
                         (static_cast<uint32_t>(header[6]) << 8) |
                         static_cast<uint32_t>(header[7]);
  return static_cast<int>(count);
}

std::string ClientModelName(int index) {
  char name[32];
  std::snprintf(name, sizeof(name), "client_%03d.txt", index);
  return name;
}

PartitionSpec SeededPartitionSpec(const ExperimentConfig& config) {
  PartitionSpec spec = config.partition;
  spec.seed = config.root_seed;
  return spec;
}

// privacy_report.json for this config (helper shared by account/simulate).
FederatedPrivacyReport WritePrivacyReport(const ExperimentConfig& config,
                                          const std::string& out_dir,
                                          bool write_curves) {
  const ClientPrivacyParams params =
      DerivePrivacyParams(config, TrainPoolSize(config));
  const std::vector<ClientPrivacyParams> clients(
      static_cast<size_t>(config.partition.num_clients), params);
  const FederatedPrivacyReport report = MakePrivacyReport(clients);

  std::vector<std::string> curve_paths;
  if (write_curves) {
    const std::string curve_dir = (fs::path(out_dir) / "curves").string();
    EnsureDirectory(curve_dir);
    for (size_t i = 0; i < report.single_round_curves.size(); ++i) {
      const std::string rel =
          (fs::path("curves") / ClientModelName(static_cast<int>(i)))
              .string();
      WriteCurveFile(report.single_round_curves[i],
                     (fs::path(out_dir) / rel).string());
      curve_paths.push_back(rel);
    }
  }
  const nlohmann::json json_report = ReportToJson(report, curve_paths);
  WriteTextFile((fs::path(out_dir) / "privacy_report.json").string(),
                json_report.dump(2) + "\n");
  return report;
}

}  // namespace

DataPools LoadDataPools(const ExperimentConfig& config) {
  DataPools pools;
  if (config.dataset.source == DatasetConfig::Source::kSynthetic) {
    const SyntheticDataConfig& synth = config.dataset.synthetic;
    pools.train = SynthDataset(synth.num_classes, synth.input_dim,
                               synth.train_per_class, synth.spread,
                               config.root_seed);
    pools.test = SynthDataset(synth.num_classes, synth.input_dim,
                              synth.test_per_class, synth.spread,
                              config.root_seed + 1);
    return pools;
  }
  pools.train = LoadIdxDataset(config.dataset.idx.train_images,
                               config.dataset.idx.train_labels);
  pools.test = LoadIdxDataset(config.dataset.idx.test_images,
                              config.dataset.idx.test_labels);
  if (pools.train.num_features != pools.test.num_features) {
    throw InvalidParameterError(
        "train and test idx pools disagree on the feature count");
  }
  // Unify the label space so test labels never fall outside the model head.
  const int num_classes =
      std::max(pools.train.num_classes, pools.test.num_classes);
  pools.train.num_classes = num_classes;
  pools.test.num_classes = num_classes;
  return pools;
}

ModelSpec ResolveModelSpec(const ExperimentConfig& config,
                           const LabeledDataset& train) {
  ModelSpec spec;
  spec.arch = config.model.arch;
  spec.input_dim = train.num_features;
  spec.num_classes = train.num_classes;
  spec.hidden_units = config.model.hidden_units;
  spec.Validate();
  return spec;
}

ClientPrivacyParams DerivePrivacyParams(const ExperimentConfig& config,
                                        int train_pool_size) {
  ClientPrivacyParams params;
  params.batch_size = config.federation.batch_size;
  if (config.partition.scheme == PartitionScheme::kShard) {
    if (config.partition.total_shards <= 0 ||
        train_pool_size % config.partition.total_shards != 0) {
      throw InvalidParameterError(
          "train pool size must be divisible by partition.total_shards");
    }
    params.dataset_size = train_pool_size / config.partition.total_shards *
                          config.partition.shards_per_client;
  } else {
    params.dataset_size = config.partition.train_per_client;
  }
  params.noise_scale = config.federation.noise_scale;
  params.clip_norm = config.federation.clip_norm;
  params.local_iters = config.federation.local_iters;
  params.sync_rounds = config.federation.rounds;
  params.client_sampling_p = config.federation.sync_probability;
  return params;
}

int TrainPoolSize(const ExperimentConfig& config) {
  if (config.dataset.source == DatasetConfig::Source::kSynthetic) {
    return config.dataset.synthetic.num_classes *
           config.dataset.synthetic.train_per_class;
  }
  return ReadIdxLabelCount(config.dataset.idx.train_labels);
}

FederatedPrivacyReport RunAccount(const ExperimentConfig& config,
                                  const std::string& out_dir,
                                  bool write_curves) {
  config.Validate();
  EnsureDirectory(out_dir);
  return WritePrivacyReport(config, out_dir, write_curves);
}

void RunPartitionCommand(const ExperimentConfig& config,
                         const std::string& out_dir) {
  config.Validate();
  EnsureDirectory(out_dir);
  const DataPools pools = LoadDataPools(config);
  const PartitionSpec spec = SeededPartitionSpec(config);
  const Partition partition = MakePartition(pools.train, pools.test, spec);
  const nlohmann::json manifest =
      PartitionManifest(partition, spec, pools.train, pools.test);
  WriteTextFile((fs::path(out_dir) / "partition.json").string(),
                manifest.dump(2) + "\n");
}

RunResult RunSimulate(const ExperimentConfig& config,
                      const std::string& out_dir) {
  config.Validate();
  EnsureDirectory(out_dir);
  const DataPools pools = LoadDataPools(config);
  const PartitionSpec spec = SeededPartitionSpec(config);
  const Partition partition = MakePartition(pools.train, pools.test, spec);
  const ModelSpec model_spec = ResolveModelSpec(config, pools.train);

  FederationState state =
      InitFederation(model_spec, partition, config.root_seed);
  RunResult result = RunFederation(std::move(state), pools.train, pools.test,
                                   config.federation, config.metric_every);

  WriteMetricsCsv(result.metrics,
                  (fs::path(out_dir) / "metrics.csv").string());

  const std::string model_dir = (fs::path(out_dir) / "models").string();
  EnsureDirectory(model_dir);
  WriteModelFile(result.state.global_model,
                 (fs::path(model_dir) / "global.txt").string());
  for (size_t i = 0; i < result.state.clients.size(); ++i) {
    WriteModelFile(
        result.state.clients[i].local_model,
        (fs::path(model_dir) / ClientModelName(static_cast<int>(i)))
            .string());
  }

  const nlohmann::json manifest =
      PartitionManifest(partition, spec, pools.train, pools.test);
  WriteTextFile((fs::path(out_dir) / "partition.json").string(),
                manifest.dump(2) + "\n");

  WritePrivacyReport(config, out_dir, /*write_curves=*/false);
  return result;
}

CurveRequest::Kind ParseCurveKind(const std::string& name) {
  if (name == "gaussian") return CurveRequest::Kind::kGaussian;
  if (name == "subsample") return CurveRequest::Kind::kSubsample;
  if (name == "mixture") return CurveRequest::Kind::kMixture;
  throw InvalidParameterError("unknown curve kind: " + name);
}

std::string RunCurveCommand(const CurveRequest& request,
                            const std::string& out_dir) {
  if (!(request.mu >= 0.0) || !std::isfinite(request.mu)) {
    throw InvalidParameterError("curve mu must be finite and >= 0");
  }
  if (!(request.p >= 0.0) || request.p > 1.0) {
    throw InvalidParameterError("curve p must be in [0, 1]");
  }
  TradeoffCurve curve = MakeGaussianCurve(request.mu);
  switch (request.kind) {
    case CurveRequest::Kind::kGaussian:
      break;
    case CurveRequest::Kind::kSubsample:
      curve = SubsampleOperator(curve, request.p);
      break;
    case CurveRequest::Kind::kMixture:
      curve = MixtureLowerBound(curve, request.p);
      break;
  }
  EnsureDirectory(out_dir);
  const std::string path = (fs::path(out_dir) / "curve.txt").string();
  WriteCurveFile(curve, path);
  return path;
}

}  // namespace fedgdp
