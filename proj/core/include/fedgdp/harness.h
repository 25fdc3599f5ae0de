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
// The experiment harness behind the command-line tool. Each command takes
// a parsed ExperimentConfig and an output directory and leaves deterministic
// artifacts there:
//   account   -> privacy_report.json (+ curves/client_NNN.txt on request)
//   partition -> partition.json
//   simulate  -> metrics.csv, privacy_report.json, partition.json,
//                models/global.txt, models/client_NNN.txt
//   curve     -> curve.txt
// Every simulate output directory carries the privacy report, so a trained
// artifact is never separated from its guarantee.

#ifndef FEDGDP_HARNESS_H_
#define FEDGDP_HARNESS_H_

#include <string>

#include "fedgdp/accountant.h"
#include "fedgdp/config.h"
#include "fedgdp/dataset.h"
#include "fedgdp/engine.h"
#include "fedgdp/model.h"

namespace fedgdp {

struct DataPools {
  LabeledDataset train;
  LabeledDataset test;
};

// Materializes the train/test pools named by the dataset block. Synthetic
// pools derive from the root seed (train from root_seed, test from
// root_seed + 1) so a config determines its data.
DataPools LoadDataPools(const ExperimentConfig& config);

// The architecture with input/output dimensions taken from the train pool.
ModelSpec ResolveModelSpec(const ExperimentConfig& config,
                           const LabeledDataset& train);

// The per-client privacy parameters implied by the config. dataset_size is
// the exact per-client train-shard size: shard schemes derive it from the
// train pool, the others read it off the partition spec.
ClientPrivacyParams DerivePrivacyParams(const ExperimentConfig& config,
                                        int train_pool_size);

// The number of examples in the configured train pool, without loading
// feature data (synthetic pools are sized by arithmetic, idx pools by the
// label-file header).
int TrainPoolSize(const ExperimentConfig& config);

// Writes privacy_report.json (and per-client single-round curve files when
// write_curves is set) under out_dir; returns the report.
FederatedPrivacyReport RunAccount(const ExperimentConfig& config,
                                  const std::string& out_dir,
                                  bool write_curves = false);

// Partitions the configured pools and writes partition.json under out_dir.
void RunPartitionCommand(const ExperimentConfig& config,
                         const std::string& out_dir);

// Runs the federation and writes metrics.csv, model checkpoints, the
// partition manifest, and the privacy report under out_dir.
RunResult RunSimulate(const ExperimentConfig& config,
                      const std::string& out_dir);

struct CurveRequest {
  enum class Kind { kGaussian, kSubsample, kMixture };
  Kind kind = Kind::kGaussian;
  double mu = 0.0;
  double p = 1.0;  // sampling rate for the subsample / mixture kinds
};

CurveRequest::Kind ParseCurveKind(const std::string& name);

// Writes the requested curve on the standard grid to out_dir/curve.txt and
// returns that path.
std::string RunCurveCommand(const CurveRequest& request,
                            const std::string& out_dir);

}  // namespace fedgdp

#endif  // FEDGDP_HARNESS_H_
