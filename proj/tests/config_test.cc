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

#include "fedgdp/config.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fedgdp/errors.h"

namespace fedgdp {
namespace {

using ::testing::HasSubstr;
using nlohmann::json;

constexpr char kShardConfig[] = R"json({
  "dataset": {"source": "synthetic", "num_classes": 6, "input_dim": 10,
              "train_per_class": 200, "test_per_class": 50, "spread": 2.0},
  "model": {"arch": "multinomial-logistic"},
  "partition": {"scheme": "shard", "num_clients": 10, "total_shards": 20,
                "shards_per_client": 2, "test_per_client": 30},
  "federation": {"rounds": 3, "local_iters": 5, "batch_size": 16,
                 "noise_scale": 1.0, "clip_norm": 1.0},
  "output_dir": "artifacts",
  "root_seed": 7,
  "metric_every": 2
})json";

std::string ExpectThrowMessage(const std::string& text) {
  try {
    ParseExperimentConfig(text);
  } catch (const InvalidParameterError& e) {
    return e.what();
  }
  ADD_FAILURE() << "expected InvalidParameterError for: " << text;
  return "";
}

TEST(ConfigParseTest, ReadsEveryBlock) {
  const ExperimentConfig config = ParseExperimentConfig(kShardConfig);
  EXPECT_EQ(config.dataset.source, DatasetConfig::Source::kSynthetic);
  EXPECT_EQ(config.dataset.synthetic.num_classes, 6);
  EXPECT_EQ(config.dataset.synthetic.input_dim, 10);
  EXPECT_EQ(config.dataset.synthetic.train_per_class, 200);
  EXPECT_EQ(config.dataset.synthetic.test_per_class, 50);
  EXPECT_DOUBLE_EQ(config.dataset.synthetic.spread, 2.0);
  EXPECT_EQ(config.model.arch, ModelArch::kMultinomialLogistic);
  EXPECT_EQ(config.partition.scheme, PartitionScheme::kShard);
  EXPECT_EQ(config.partition.num_clients, 10);
  EXPECT_EQ(config.partition.total_shards, 20);
  EXPECT_EQ(config.partition.shards_per_client, 2);
  EXPECT_EQ(config.partition.test_per_client, 30);
  EXPECT_EQ(config.federation.rounds, 3);
  EXPECT_EQ(config.federation.local_iters, 5);
  EXPECT_EQ(config.federation.batch_size, 16);
  EXPECT_DOUBLE_EQ(config.federation.noise_scale, 1.0);
  EXPECT_EQ(config.output_dir, "artifacts");
  EXPECT_EQ(config.root_seed, 7u);
  EXPECT_EQ(config.metric_every, 2);
  // The partition inherits the root seed.
  EXPECT_EQ(config.partition.seed, 7u);
}

TEST(ConfigParseTest, OmittedKeysTakeDocumentedDefaults) {
  const ExperimentConfig config = ParseExperimentConfig(R"json({
    "dataset": {"source": "synthetic"},
    "partition": {"scheme": "iid", "num_clients": 4,
                  "train_per_client": 100, "test_per_client": 25},
    "federation": {"batch_size": 8}
  })json");
  EXPECT_EQ(config.dataset.synthetic.num_classes, 6);
  EXPECT_EQ(config.dataset.synthetic.input_dim, 10);
  EXPECT_EQ(config.model.arch, ModelArch::kMultinomialLogistic);
  EXPECT_DOUBLE_EQ(config.federation.sync_probability, 1.0);
  EXPECT_EQ(config.federation.rounds, 1);
  EXPECT_EQ(config.federation.local_iters, 1);
  EXPECT_DOUBLE_EQ(config.federation.aggregation_rate, 1.0);
  EXPECT_DOUBLE_EQ(config.federation.helper_alpha, 0.1);
  EXPECT_EQ(config.federation.helper_map, HelperMap::kInterpolation);
  EXPECT_EQ(config.federation.optimizer, Optimizer::kNoisySgd);
  EXPECT_DOUBLE_EQ(config.federation.learning_rate.base_rate, 0.1);
  EXPECT_DOUBLE_EQ(config.federation.learning_rate.decay_factor, 1.0);
  EXPECT_EQ(config.federation.learning_rate.decay_interval_rounds, 10);
  EXPECT_DOUBLE_EQ(config.federation.noise_scale, 0.0);
  EXPECT_DOUBLE_EQ(config.federation.clip_norm, 1.0);
  EXPECT_EQ(config.federation.batch_mode, BatchMode::kPoissonPerExample);
  EXPECT_DOUBLE_EQ(config.federation.adam.beta1, 0.9);
  EXPECT_DOUBLE_EQ(config.federation.adam.beta2, 0.999);
  EXPECT_DOUBLE_EQ(config.federation.adam.epsilon, 1e-8);
  EXPECT_EQ(config.federation.worker_threads, 1);
  EXPECT_EQ(config.output_dir, ".");
  EXPECT_EQ(config.root_seed, 1u);
  EXPECT_EQ(config.metric_every, 1);
}

TEST(ConfigParseTest, RoundTripIsIdentity) {
  const char* documents[] = {
      kShardConfig,
      R"json({
        "dataset": {"source": "idx", "train_images": "a", "train_labels": "b",
                    "test_images": "c", "test_labels": "d"},
        "model": {"arch": "one-hidden-mlp", "hidden_units": 32},
        "partition": {"scheme": "dirichlet", "num_clients": 5,
                      "train_per_client": 100, "test_per_client": 20,
                      "dirichlet_beta": 0.5},
        "federation": {"batch_size": 4, "optimizer": "noisy-adam",
                       "batch_mode": "fixed-size-uniform"}
      })json",
      R"json({
        "dataset": {"source": "synthetic", "train_per_class": 400},
        "partition": {"scheme": "dirichlet", "num_clients": 5,
                      "train_per_client": 100, "test_per_client": 20,
                      "dirichlet_beta": "inf"},
        "federation": {"batch_size": 4, "noise_scale": 0.0,
                       "clip_norm": "inf"}
      })json",
  };
  for (const char* text : documents) {
    const ExperimentConfig first = ParseExperimentConfig(text);
    const json once = ExperimentConfigToJson(first);
    const ExperimentConfig second = ParseExperimentConfig(once.dump());
    const json twice = ExperimentConfigToJson(second);
    EXPECT_EQ(once, twice) << text;
  }
}

TEST(ConfigParseTest, InfinitySentinelsSurviveTheRoundTrip) {
  const ExperimentConfig config = ParseExperimentConfig(R"json({
    "dataset": {"source": "synthetic", "train_per_class": 400},
    "partition": {"scheme": "dirichlet", "num_clients": 5,
                  "train_per_client": 100, "test_per_client": 20,
                  "dirichlet_beta": "inf"},
    "federation": {"batch_size": 4, "clip_norm": "inf"}
  })json");
  EXPECT_TRUE(std::isinf(config.partition.dirichlet_beta));
  EXPECT_TRUE(std::isinf(config.federation.clip_norm));
  const json serialized = ExperimentConfigToJson(config);
  EXPECT_EQ(serialized["partition"]["dirichlet_beta"], "inf");
  EXPECT_EQ(serialized["federation"]["clip_norm"], "inf");
}

TEST(ConfigParseTest, RejectsUnknownKeysAtEveryLevel) {
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "dataset": {"source": "synthetic"},
    "partition": {"scheme": "iid", "num_clients": 2,
                  "train_per_client": 10, "test_per_client": 5},
    "federation": {"batch_size": 2},
    "typo_key": 1
  })json"),
              HasSubstr("config.typo_key"));
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "dataset": {"source": "synthetic", "classes": 6},
    "partition": {"scheme": "iid", "num_clients": 2,
                  "train_per_client": 10, "test_per_client": 5},
    "federation": {"batch_size": 2}
  })json"),
              HasSubstr("dataset.classes"));
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "dataset": {"source": "synthetic"},
    "partition": {"scheme": "iid", "num_clients": 2, "train_per_client": 10,
                  "test_per_client": 5, "total_shards": 4},
    "federation": {"batch_size": 2}
  })json"),
              HasSubstr("partition.total_shards"));
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "dataset": {"source": "synthetic"},
    "partition": {"scheme": "iid", "num_clients": 2,
                  "train_per_client": 10, "test_per_client": 5},
    "federation": {"batch_size": 2, "learning_rate": {"rate": 0.1}}
  })json"),
              HasSubstr("learning_rate.rate"));
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "dataset": {"source": "synthetic"},
    "partition": {"scheme": "iid", "num_clients": 2,
                  "train_per_client": 10, "test_per_client": 5},
    "federation": {"batch_size": 2, "adam": {"beta3": 0.5}}
  })json"),
              HasSubstr("adam.beta3"));
}

TEST(ConfigParseTest, RejectsMissingRequiredKeys) {
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "partition": {"scheme": "iid", "num_clients": 2,
                  "train_per_client": 10, "test_per_client": 5},
    "federation": {"batch_size": 2}
  })json"),
              HasSubstr("dataset"));
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "dataset": {"source": "synthetic"},
    "partition": {"scheme": "iid", "num_clients": 2,
                  "train_per_client": 10, "test_per_client": 5},
    "federation": {}
  })json"),
              HasSubstr("batch_size"));
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "dataset": {"source": "synthetic"},
    "partition": {"scheme": "shard", "num_clients": 2, "test_per_client": 5},
    "federation": {"batch_size": 2}
  })json"),
              HasSubstr("total_shards"));
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "dataset": {"source": "idx", "train_images": "a", "train_labels": "b",
                "test_images": "c"},
    "partition": {"scheme": "iid", "num_clients": 2,
                  "train_per_client": 10, "test_per_client": 5},
    "federation": {"batch_size": 2}
  })json"),
              HasSubstr("test_labels"));
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "dataset": {"source": "synthetic"},
    "model": {"arch": "one-hidden-mlp"},
    "partition": {"scheme": "iid", "num_clients": 2,
                  "train_per_client": 10, "test_per_client": 5},
    "federation": {"batch_size": 2}
  })json"),
              HasSubstr("hidden_units"));
}

TEST(ConfigParseTest, RejectsWrongTypesAndBadJson) {
  EXPECT_THAT(ExpectThrowMessage("this is not json"),
              HasSubstr("not valid JSON"));
  EXPECT_THAT(ExpectThrowMessage("[1, 2, 3]"), HasSubstr("JSON object"));
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "dataset": {"source": "synthetic"},
    "partition": {"scheme": "iid", "num_clients": 2,
                  "train_per_client": 10, "test_per_client": 5},
    "federation": {"batch_size": 2.5}
  })json"),
              HasSubstr("batch_size"));
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "dataset": {"source": "synthetic"},
    "partition": {"scheme": "iid", "num_clients": 2,
                  "train_per_client": 10, "test_per_client": 5},
    "federation": {"batch_size": 2, "clip_norm": "huge"}
  })json"),
              HasSubstr("clip_norm"));
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "dataset": {"source": "oracle"},
    "partition": {"scheme": "iid", "num_clients": 2,
                  "train_per_client": 10, "test_per_client": 5},
    "federation": {"batch_size": 2}
  })json"),
              HasSubstr("source"));
}

TEST(ConfigValidateTest, EnforcesCrossFieldRules) {
  // Fixed-size batches cannot exceed the per-client train shard.
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "dataset": {"source": "synthetic"},
    "partition": {"scheme": "iid", "num_clients": 2,
                  "train_per_client": 10, "test_per_client": 5},
    "federation": {"batch_size": 11, "batch_mode": "fixed-size-uniform"}
  })json"),
              HasSubstr("batch_size"));
  // Train demand larger than the synthetic pool.
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "dataset": {"source": "synthetic", "num_classes": 2,
                "train_per_class": 10},
    "partition": {"scheme": "iid", "num_clients": 5,
                  "train_per_client": 10, "test_per_client": 5},
    "federation": {"batch_size": 2}
  })json"),
              HasSubstr("train demand"));
  // Infinite clipping is only a noiseless-oracle device.
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "dataset": {"source": "synthetic"},
    "partition": {"scheme": "iid", "num_clients": 2,
                  "train_per_client": 10, "test_per_client": 5},
    "federation": {"batch_size": 2, "noise_scale": 1.0, "clip_norm": "inf"}
  })json"),
              HasSubstr("clip_norm"));
  // hidden_units is an MLP-only field.
  EXPECT_THAT(ExpectThrowMessage(R"json({
    "dataset": {"source": "synthetic"},
    "model": {"arch": "multinomial-logistic", "hidden_units": 8},
    "partition": {"scheme": "iid", "num_clients": 2,
                  "train_per_client": 10, "test_per_client": 5},
    "federation": {"batch_size": 2}
  })json"),
              HasSubstr("hidden_units"));
}

TEST(ConfigFileTest, LoadsFromDiskAndRejectsMissingFiles) {
  const std::string path =
      (std::filesystem::path(testing::TempDir()) / "config_load.json")
          .string();
  std::ofstream(path) << kShardConfig;
  const ExperimentConfig config = LoadExperimentConfig(path);
  EXPECT_EQ(config.partition.num_clients, 10);
  EXPECT_THROW(LoadExperimentConfig("/nonexistent/config.json"),
               InvalidParameterError);
}

}  // namespace
}  // namespace fedgdp
