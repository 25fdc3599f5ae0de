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
// Small differentiable classifiers with exact per-example gradients:
// multinomial logistic regression and a one-hidden-layer ReLU MLP, both
// trained with softmax cross-entropy. Weights live in a flat vector so the
// training loop can treat models as plain numeric vectors.

#ifndef FEDGDP_MODEL_H_
#define FEDGDP_MODEL_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fedgdp/dataset.h"

namespace fedgdp {

enum class ModelArch { kMultinomialLogistic, kOneHiddenMlp };

std::string ModelArchName(ModelArch arch);
ModelArch ParseModelArch(const std::string& name);

struct ModelSpec {
  ModelArch arch = ModelArch::kMultinomialLogistic;
  int input_dim = 0;
  int num_classes = 0;
  int hidden_units = 0;  // used by the MLP only

  // Flat weight count. Logistic: C*d + C. MLP: h*d + h + C*h + C.
  int Dimension() const;
  // Throws InvalidParameterError naming the offending field.
  void Validate() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Weight layout. Logistic: [W (C x d, row-major) | bias (C)]. MLP:
// [W1 (h x d) | b1 (h) | W2 (C x h) | b2 (C)].
struct ModelVector {
  ModelSpec spec;
  std::vector<double> weights;
};

// Zero-bias Glorot-uniform initialization, deterministic under seed.
ModelVector InitModel(const ModelSpec& spec, uint64_t seed);

// Class scores for one example (features has spec.input_dim entries).
std::vector<double> Logits(const ModelVector& model, const double* features);

// Softmax cross-entropy of one example.
double ExampleLoss(const ModelVector& model, const double* features,
                   int label);

int Predict(const ModelVector& model, const double* features);

// Exact gradient of ExampleLoss with respect to the flat weights; grad is
// resized to the model dimension. ReLU uses subgradient 0 at inactive units.
void PerSampleGradient(const ModelVector& model, const double* features,
                       int label, std::vector<double>& grad);

// In-place rescale v <- v / max{1, ||v|| / clip_norm}, so the result has
// norm at most clip_norm and short vectors pass through unchanged. An
// infinite clip_norm disables clipping. Requires clip_norm > 0.
void ClipGradient(std::vector<double>& v, double clip_norm);

// Mean metrics over the selected rows (all rows if indices is omitted).
double Accuracy(const ModelVector& model, const LabeledDataset& data,
                const std::vector<int>& indices);
double Accuracy(const ModelVector& model, const LabeledDataset& data);
double MeanLoss(const ModelVector& model, const LabeledDataset& data,
                const std::vector<int>& indices);
double MeanLoss(const ModelVector& model, const LabeledDataset& data);

// Checkpoint format: "# model v1" header, architecture fields, then one
// weight per line in full precision.
void WriteModelFile(const ModelVector& model, std::ostream& out);
void WriteModelFile(const ModelVector& model, const std::string& path);
ModelVector ReadModelFile(std::istream& in);
ModelVector ReadModelFile(const std::string& path);

}  // namespace fedgdp

#endif  // FEDGDP_MODEL_H_
