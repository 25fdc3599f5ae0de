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

#include "fedgdp/model.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "fedgdp/dataset.h"
#include "fedgdp/errors.h"

namespace fedgdp {
namespace {

using ::testing::Each;

ModelSpec LogisticSpec(int input_dim, int num_classes) {
  ModelSpec spec;
  spec.arch = ModelArch::kMultinomialLogistic;
  spec.input_dim = input_dim;
  spec.num_classes = num_classes;
  return spec;
}

ModelSpec MlpSpec(int input_dim, int num_classes, int hidden_units) {
  ModelSpec spec;
  spec.arch = ModelArch::kOneHiddenMlp;
  spec.input_dim = input_dim;
  spec.num_classes = num_classes;
  spec.hidden_units = hidden_units;
  return spec;
}

// Central finite difference of the per-example loss in one coordinate;
// the independent check for the analytic backprop.
double CentralDifference(ModelVector model, const double* features, int label,
                         std::size_t coord) {
  const double h = 1e-5;
  const double original = model.weights[coord];
  model.weights[coord] = original + h;
  const double up = ExampleLoss(model, features, label);
  model.weights[coord] = original - h;
  const double down = ExampleLoss(model, features, label);
  return (up - down) / (2.0 * h);
}

void ExpectGradientMatchesFiniteDifferences(const ModelVector& model,
                                            const double* features,
                                            int label) {
  std::vector<double> grad;
  PerSampleGradient(model, features, label, grad);
  ASSERT_EQ(grad.size(), model.weights.size());
  for (std::size_t j = 0; j < grad.size(); ++j) {
    const double numeric = CentralDifference(model, features, label, j);
    EXPECT_NEAR(grad[j], numeric, 1e-6 * (1.0 + std::fabs(numeric)))
        << "coordinate " << j;
  }
}

TEST(ModelSpecTest, DimensionArithmetic) {
  EXPECT_EQ(LogisticSpec(4, 3).Dimension(), 4 * 3 + 3);
  EXPECT_EQ(LogisticSpec(784, 10).Dimension(), 7850);
  EXPECT_EQ(MlpSpec(4, 3, 5).Dimension(), 5 * 4 + 5 + 3 * 5 + 3);
  EXPECT_EQ(MlpSpec(784, 10, 100).Dimension(), 78400 + 100 + 1000 + 10);
}

TEST(ModelSpecTest, ValidateRejectsBadFields) {
  EXPECT_THROW(LogisticSpec(0, 3).Validate(), InvalidParameterError);
  EXPECT_THROW(LogisticSpec(4, 1).Validate(), InvalidParameterError);
  EXPECT_THROW(MlpSpec(4, 3, 0).Validate(), InvalidParameterError);
  EXPECT_NO_THROW(LogisticSpec(4, 2).Validate());
  EXPECT_NO_THROW(MlpSpec(1, 2, 1).Validate());
}

TEST(ModelSpecTest, ArchNamesRoundTrip) {
  for (ModelArch arch :
       {ModelArch::kMultinomialLogistic, ModelArch::kOneHiddenMlp}) {
    EXPECT_EQ(ParseModelArch(ModelArchName(arch)), arch);
  }
  EXPECT_THROW(ParseModelArch("perceptron"), InvalidParameterError);
}

TEST(InitModelTest, DeterministicUnderSeed) {
  const ModelSpec spec = MlpSpec(7, 4, 9);
  const ModelVector a = InitModel(spec, 42);
  const ModelVector b = InitModel(spec, 42);
  const ModelVector c = InitModel(spec, 43);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_NE(a.weights, c.weights);
}

TEST(InitModelTest, LogisticBiasesZeroAndWeightsInGlorotRange) {
  const ModelSpec spec = LogisticSpec(6, 5);
  const ModelVector model = InitModel(spec, 7);
  ASSERT_EQ(static_cast<int>(model.weights.size()), spec.Dimension());
  const double limit = std::sqrt(6.0 / (6 + 5));
  double max_abs = 0.0;
  for (int k = 0; k < 6 * 5; ++k) {
    EXPECT_LE(std::fabs(model.weights[k]), limit);
    max_abs = std::max(max_abs, std::fabs(model.weights[k]));
  }
  EXPECT_GT(max_abs, 0.0);
  for (int k = 6 * 5; k < spec.Dimension(); ++k) {
    EXPECT_EQ(model.weights[k], 0.0);
  }
}

TEST(InitModelTest, MlpBiasBlocksZeroAndLayersBounded) {
  const int d = 4, c = 3, h = 5;
  const ModelVector model = InitModel(MlpSpec(d, c, h), 11);
  const double limit1 = std::sqrt(6.0 / (d + h));
  const double limit2 = std::sqrt(6.0 / (h + c));
  int k = 0;
  for (int i = 0; i < h * d; ++i, ++k) {
    EXPECT_LE(std::fabs(model.weights[k]), limit1);
  }
  for (int i = 0; i < h; ++i, ++k) EXPECT_EQ(model.weights[k], 0.0);
  for (int i = 0; i < c * h; ++i, ++k) {
    EXPECT_LE(std::fabs(model.weights[k]), limit2);
  }
  for (int i = 0; i < c; ++i, ++k) EXPECT_EQ(model.weights[k], 0.0);
  EXPECT_EQ(k, static_cast<int>(model.weights.size()));
}

TEST(LogisticGradientTest, ClosedFormAtZeroWeights) {
  const ModelSpec spec = LogisticSpec(3, 3);
  ModelVector model{spec, std::vector<double>(spec.Dimension(), 0.0)};
  const double x[] = {0.2, 0.5, 0.9};
  const int label = 1;

  EXPECT_NEAR(ExampleLoss(model, x, label), std::log(3.0), 1e-15);

  std::vector<double> grad;
  PerSampleGradient(model, x, label, grad);
  for (int c = 0; c < 3; ++c) {
    const double factor = 1.0 / 3.0 - (c == label ? 1.0 : 0.0);
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(grad[c * 3 + j], factor * x[j], 1e-15);
    }
    EXPECT_NEAR(grad[9 + c], factor, 1e-15);
  }
}

TEST(LogisticGradientTest, MatchesFiniteDifferences) {
  const ModelSpec spec = LogisticSpec(5, 4);
  std::mt19937_64 rng(321);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> labels(0, 3);
  for (int trial = 0; trial < 10; ++trial) {
    ModelVector model = InitModel(spec, 1000 + trial);
    for (double& w : model.weights) w += 0.3 * (unit(rng) - 0.5);
    double x[5];
    for (double& v : x) v = unit(rng);
    ExpectGradientMatchesFiniteDifferences(model, x, labels(rng));
  }
}

TEST(MlpGradientTest, ZeroOutputLayerKillsHiddenGradients) {
  // With W2 = 0 the logits depend only on b2, so the first layer gets no
  // gradient signal and the output-layer gradient has a closed form.
  const ModelSpec spec = MlpSpec(2, 2, 2);
  ModelVector model{spec, std::vector<double>(spec.Dimension(), 0.0)};
  // W1 = [[1, 0], [0, 1]], b1 = (0.1, 0.2), W2 = 0, b2 = (0.3, -0.1).
  model.weights = {1.0, 0.0, 0.0, 1.0, 0.1, 0.2,
                   0.0, 0.0, 0.0, 0.0, 0.3, -0.1};
  const double x[] = {0.5, 0.4};
  const int label = 0;

  std::vector<double> grad;
  PerSampleGradient(model, x, label, grad);

  for (int k = 0; k < 6; ++k) {
    EXPECT_EQ(grad[k], 0.0) << "first-layer coordinate " << k;
  }
  const double z0 = 0.3, z1 = -0.1;
  const double p0 = std::exp(z0) / (std::exp(z0) + std::exp(z1));
  const double d0 = p0 - 1.0;
  const double d1 = (1.0 - p0);
  const double a0 = 0.6, a1 = 0.6;  // ReLU(x + b1) per hidden unit
  EXPECT_NEAR(grad[6], d0 * a0, 1e-15);
  EXPECT_NEAR(grad[7], d0 * a1, 1e-15);
  EXPECT_NEAR(grad[8], d1 * a0, 1e-15);
  EXPECT_NEAR(grad[9], d1 * a1, 1e-15);
  EXPECT_NEAR(grad[10], d0, 1e-15);
  EXPECT_NEAR(grad[11], d1, 1e-15);
}

TEST(MlpGradientTest, InactiveUnitGetsNoGradient) {
  const ModelSpec spec = MlpSpec(2, 2, 2);
  ModelVector model{spec, std::vector<double>(spec.Dimension(), 0.0)};
  // Hidden unit 1 has pre-activation -1 - 0.9x < 0 for nonnegative input.
  model.weights = {0.7, 0.2, -1.0, -0.9, 0.0, -1.0,
                   0.4, 0.5, -0.3, 0.6, 0.0, 0.0};
  const double x[] = {0.8, 0.3};

  std::vector<double> grad;
  PerSampleGradient(model, x, 1, grad);

  EXPECT_EQ(grad[2], 0.0);  // W1 row of the inactive unit
  EXPECT_EQ(grad[3], 0.0);
  EXPECT_EQ(grad[5], 0.0);  // its bias
  EXPECT_NE(grad[0], 0.0);  // the active unit still learns
  EXPECT_NE(grad[4], 0.0);
}

TEST(MlpGradientTest, MatchesFiniteDifferences) {
  const ModelSpec spec = MlpSpec(4, 3, 6);
  std::mt19937_64 rng(654);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> labels(0, 2);
  for (int trial = 0; trial < 10; ++trial) {
    ModelVector model = InitModel(spec, 2000 + trial);
    for (double& w : model.weights) w += 0.3 * (unit(rng) - 0.5);
    double x[4];
    for (double& v : x) v = unit(rng);
    ExpectGradientMatchesFiniteDifferences(model, x, labels(rng));
  }
}

TEST(GradientTest, RejectsOutOfRangeLabel) {
  const ModelVector model = InitModel(LogisticSpec(2, 3), 1);
  const double x[] = {0.1, 0.2};
  std::vector<double> grad;
  EXPECT_THROW(PerSampleGradient(model, x, 3, grad), InvalidParameterError);
  EXPECT_THROW(PerSampleGradient(model, x, -1, grad), InvalidParameterError);
  EXPECT_THROW(ExampleLoss(model, x, 3), InvalidParameterError);
}

TEST(ClipGradientTest, RescalesLongVectorToTheBall) {
  std::vector<double> v = {3.0, 4.0};
  ClipGradient(v, 1.0);
  EXPECT_DOUBLE_EQ(v[0], 0.6);
  EXPECT_DOUBLE_EQ(v[1], 0.8);
}

TEST(ClipGradientTest, LeavesShortVectorsUntouched) {
  std::vector<double> v = {0.3, 0.4};
  const std::vector<double> original = v;
  ClipGradient(v, 1.0);
  EXPECT_EQ(v, original);

  std::vector<double> boundary = {3.0, 4.0};
  ClipGradient(boundary, 5.0);
  EXPECT_EQ(boundary, (std::vector<double>{3.0, 4.0}));

  std::vector<double> zero = {0.0, 0.0, 0.0};
  ClipGradient(zero, 0.5);
  EXPECT_THAT(zero, Each(0.0));
}

TEST(ClipGradientTest, InfiniteBoundIsANoOp) {
  std::vector<double> v = {1e8, -2e9, 3.5};
  const std::vector<double> original = v;
  ClipGradient(v, std::numeric_limits<double>::infinity());
  EXPECT_EQ(v, original);
}

TEST(ClipGradientTest, RejectsNonPositiveBound) {
  std::vector<double> v = {1.0};
  EXPECT_THROW(ClipGradient(v, 0.0), InvalidParameterError);
  EXPECT_THROW(ClipGradient(v, -1.0), InvalidParameterError);
}

LabeledDataset TwoFeatureDataset() {
  LabeledDataset data;
  data.num_features = 2;
  data.num_classes = 2;
  data.features = {0.9, 0.1,   // class 0 region
                   0.8, 0.2,   // class 0 region
                   0.1, 0.9,   // class 1 region
                   0.2, 0.8};  // class 1 region
  data.labels = {0, 0, 1, 1};
  return data;
}

ModelVector FirstCoordinateClassifier() {
  // Logistic model scoring class 0 by the first feature and class 1 by the
  // second, with zero biases.
  const ModelSpec spec = LogisticSpec(2, 2);
  ModelVector model{spec, {1.0, 0.0, 0.0, 1.0, 0.0, 0.0}};
  return model;
}

TEST(EvaluationTest, PredictTakesTheArgmaxLogit) {
  const ModelVector model = FirstCoordinateClassifier();
  const double a[] = {0.9, 0.1};
  const double b[] = {0.2, 0.8};
  EXPECT_EQ(Predict(model, a), 0);
  EXPECT_EQ(Predict(model, b), 1);
}

TEST(EvaluationTest, AccuracyCountsExactFractions) {
  const LabeledDataset data = TwoFeatureDataset();
  const ModelVector model = FirstCoordinateClassifier();
  EXPECT_DOUBLE_EQ(Accuracy(model, data), 1.0);
  EXPECT_DOUBLE_EQ(Accuracy(model, data, {0, 2}), 1.0);

  // Mislabel one row through a restricted index set.
  LabeledDataset flipped = data;
  flipped.labels[0] = 1;
  EXPECT_DOUBLE_EQ(Accuracy(model, flipped), 0.75);
  EXPECT_DOUBLE_EQ(Accuracy(model, flipped, {0, 1}), 0.5);
}

TEST(EvaluationTest, MeanLossOfUniformModelIsLogNumClasses) {
  const LabeledDataset data = TwoFeatureDataset();
  const ModelSpec spec = LogisticSpec(2, 2);
  const ModelVector zero{spec, std::vector<double>(spec.Dimension(), 0.0)};
  EXPECT_NEAR(MeanLoss(zero, data), std::log(2.0), 1e-15);
  EXPECT_NEAR(MeanLoss(zero, data, {1, 3}), std::log(2.0), 1e-15);
}

TEST(EvaluationTest, EmptyIndexSetsAreRejected) {
  const LabeledDataset data = TwoFeatureDataset();
  const ModelVector model = FirstCoordinateClassifier();
  EXPECT_THROW(Accuracy(model, data, {}), InvalidParameterError);
  EXPECT_THROW(MeanLoss(model, data, {}), InvalidParameterError);
}

TEST(ModelFileTest, RoundTripsBitwiseForBothArchitectures) {
  for (const ModelSpec& spec : {LogisticSpec(5, 3), MlpSpec(5, 3, 4)}) {
    const ModelVector model = InitModel(spec, 99);
    std::stringstream stream;
    WriteModelFile(model, stream);
    const ModelVector loaded = ReadModelFile(stream);
    EXPECT_TRUE(loaded.spec == model.spec);
    EXPECT_EQ(loaded.weights, model.weights);
  }
}

TEST(ModelFileTest, RoundTripsThroughTheFilesystem) {
  const std::string path =
      (std::filesystem::path(testing::TempDir()) / "model_roundtrip.txt")
          .string();
  const ModelVector model = InitModel(MlpSpec(3, 2, 2), 5);
  WriteModelFile(model, path);

  std::ifstream in(path);
  std::string first_line;
  ASSERT_TRUE(std::getline(in, first_line));
  EXPECT_EQ(first_line, "# model v1");
  in.close();

  const ModelVector loaded = ReadModelFile(path);
  EXPECT_TRUE(loaded.spec == model.spec);
  EXPECT_EQ(loaded.weights, model.weights);
}

TEST(ModelFileTest, RejectsCorruptInput) {
  const ModelVector model = InitModel(LogisticSpec(2, 2), 3);

  {
    std::stringstream stream;
    stream << "# not a model\n";
    EXPECT_THROW(ReadModelFile(stream), ParseError);
  }
  {
    std::stringstream stream;
    WriteModelFile(model, stream);
    std::string text = stream.str();
    text.replace(text.find("weights 6"), 9, "weights 7");
    std::stringstream bad(text);
    EXPECT_THROW(ReadModelFile(bad), ParseError);
  }
  {
    std::stringstream stream;
    WriteModelFile(model, stream);
    std::string text = stream.str();
    text.resize(text.rfind('\n', text.size() - 2));  // drop the last weight
    std::stringstream bad(text);
    EXPECT_THROW(ReadModelFile(bad), ParseError);
  }
  EXPECT_THROW(ReadModelFile("/nonexistent/model.txt"), ParseError);
}

}  // namespace
}  // namespace fedgdp
