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
// fedgdp: account / simulate / partition / curve commands over a single
// JSON experiment config. Exit codes: 0 success, 2 validation failure,
// 3 runtime failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fedgdp/config.h"
#include "fedgdp/errors.h"
#include "fedgdp/harness.h"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  uint64_t seed = 0;
  CLI::Option* seed_option = nullptr;
};

void AddCommonOptions(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON experiment config")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out_dir,
                  "output directory (default: the config's output_dir)");
  args.seed_option =
      cmd->add_option("--seed", args.seed, "override the config root seed");
}

fedgdp::ExperimentConfig LoadConfig(const CommonArgs& args) {
  fedgdp::ExperimentConfig config =
      fedgdp::LoadExperimentConfig(args.config_path);
  if (args.seed_option != nullptr && args.seed_option->count() > 0) {
    config.root_seed = args.seed;
    config.partition.seed = args.seed;
  }
  return config;
}

std::string OutDir(const CommonArgs& args,
                   const fedgdp::ExperimentConfig& config) {
  return args.out_dir.empty() ? config.output_dir : args.out_dir;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"federated Gaussian-DP training and accounting toolkit"};
  app.require_subcommand(1);

  CommonArgs account_args;
  bool write_curves = false;
  CLI::App* account =
      app.add_subcommand("account", "write the federated privacy report");
  AddCommonOptions(account, account_args);
  account->add_flag("--curves", write_curves,
                    "also write per-client single-round trade-off curves");

  CommonArgs simulate_args;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "run the federation and write metrics plus checkpoints");
  AddCommonOptions(simulate, simulate_args);

  CommonArgs partition_args;
  CLI::App* partition = app.add_subcommand(
      "partition", "write the client partition manifest");
  AddCommonOptions(partition, partition_args);

  std::string curve_kind;
  double curve_mu = 0.0;
  double curve_p = 1.0;
  std::string curve_out = ".";
  CLI::App* curve = app.add_subcommand(
      "curve", "write a trade-off curve file on the standard grid");
  curve->add_option("--kind", curve_kind, "gaussian | subsample | mixture")
      ->required();
  curve->add_option("--mu", curve_mu, "Gaussian trade-off level")->required();
  curve->add_option("--p", curve_p,
                    "sampling rate for subsample / mixture kinds");
  curve->add_option("--out", curve_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (account->parsed()) {
      const fedgdp::ExperimentConfig config = LoadConfig(account_args);
      const std::string out = OutDir(account_args, config);
      const fedgdp::FederatedPrivacyReport report =
          fedgdp::RunAccount(config, out, write_curves);
      std::cout << "wrote " << out << "/privacy_report.json (mu_max "
                << report.mu_max << ", weak mu "
                << report.weak_guarantee.mu();
      if (report.strong_guarantee.has_value()) {
        std::cout << ", strong mu " << report.strong_guarantee->mu();
      }
      std::cout << ")\n";
    } else if (simulate->parsed()) {
      const fedgdp::ExperimentConfig config = LoadConfig(simulate_args);
      const std::string out = OutDir(simulate_args, config);
      const fedgdp::RunResult result = fedgdp::RunSimulate(config, out);
      std::cout << "wrote " << out << "/metrics.csv";
      if (!result.metrics.empty()) {
        const fedgdp::RoundMetrics& last = result.metrics.back();
        std::cout << " (round " << last.round << ": personalized acc "
                  << last.avg_personalized_acc << ", global acc "
                  << last.global_acc << ")";
      }
      std::cout << "\n";
    } else if (partition->parsed()) {
      const fedgdp::ExperimentConfig config = LoadConfig(partition_args);
      const std::string out = OutDir(partition_args, config);
      fedgdp::RunPartitionCommand(config, out);
      std::cout << "wrote " << out << "/partition.json\n";
    } else if (curve->parsed()) {
      fedgdp::CurveRequest request;
      request.kind = fedgdp::ParseCurveKind(curve_kind);
      request.mu = curve_mu;
      request.p = curve_p;
      std::cout << "wrote " << fedgdp::RunCurveCommand(request, curve_out)
                << "\n";
    }
    return 0;
  } catch (const fedgdp::InvalidParameterError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
