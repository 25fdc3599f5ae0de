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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "fedgdp/errors.h"
#include "fedgdp/rng.h"

namespace fedgdp {
namespace {

// Softmax probabilities from logits, max-shifted for stability.
std::vector<double> Softmax(const std::vector<double>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> probs(logits.size());
  double sum = 0.0;
  for (std::size_t c = 0; c < logits.size(); ++c) {
    probs[c] = std::exp(logits[c] - top);
    sum += probs[c];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

void CheckLabel(const ModelSpec& spec, int label) {
  if (label < 0 || label >= spec.num_classes) {
    throw InvalidParameterError("model: label outside [0, num_classes)");
  }
}

// Hidden pre-activations z = W1 x + b1 for the MLP.
std::vector<double> MlpPreActivations(const ModelVector& model,
                                      const double* features) {
  const ModelSpec& spec = model.spec;
  const double* w1 = model.weights.data();
  const double* b1 = w1 + static_cast<std::size_t>(spec.hidden_units) *
                              spec.input_dim;
  std::vector<double> z(spec.hidden_units);
  for (int h = 0; h < spec.hidden_units; ++h) {
    double acc = b1[h];
    const double* row = w1 + static_cast<std::size_t>(h) * spec.input_dim;
    for (int j = 0; j < spec.input_dim; ++j) acc += row[j] * features[j];
    z[h] = acc;
  }
  return z;
}

}  // namespace

std::string ModelArchName(ModelArch arch) {
  switch (arch) {
    case ModelArch::kMultinomialLogistic:
      return "multinomial-logistic";
    case ModelArch::kOneHiddenMlp:
      return "one-hidden-mlp";
  }
  throw InvalidParameterError("ModelArchName: unknown architecture");
}

ModelArch ParseModelArch(const std::string& name) {
  if (name == "multinomial-logistic") {
    return ModelArch::kMultinomialLogistic;
  }
  if (name == "one-hidden-mlp") return ModelArch::kOneHiddenMlp;
  throw InvalidParameterError("ParseModelArch: unknown architecture '" +
                              name + "'");
}

int ModelSpec::Dimension() const {
  Validate();
  if (arch == ModelArch::kMultinomialLogistic) {
    return num_classes * input_dim + num_classes;
  }
  return hidden_units * input_dim + hidden_units +
         num_classes * hidden_units + num_classes;
}

void ModelSpec::Validate() const {
  if (input_dim <= 0) {
    throw InvalidParameterError("ModelSpec: input_dim must be > 0");
  }
  if (num_classes < 2) {
    throw InvalidParameterError("ModelSpec: num_classes must be >= 2");
  }
  if (arch == ModelArch::kOneHiddenMlp && hidden_units <= 0) {
    throw InvalidParameterError(
        "ModelSpec: hidden_units must be > 0 for the MLP");
  }
}

ModelVector InitModel(const ModelSpec& spec, uint64_t seed) {
  spec.Validate();
  ModelVector model{spec, std::vector<double>(spec.Dimension(), 0.0)};
  std::mt19937_64 rng =
      MakeSubstream(seed, 0, kServerStream, RngPurpose::kModelInit);
  auto fill_glorot = [&rng](double* begin, std::size_t count, int fan_in,
                            int fan_out) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> unif(-limit, limit);
    for (std::size_t k = 0; k < count; ++k) begin[k] = unif(rng);
  };
  double* w = model.weights.data();
  if (spec.arch == ModelArch::kMultinomialLogistic) {
    fill_glorot(w, static_cast<std::size_t>(spec.num_classes) * spec.input_dim,
                spec.input_dim, spec.num_classes);
  } else {
    const std::size_t w1 =
        static_cast<std::size_t>(spec.hidden_units) * spec.input_dim;
    fill_glorot(w, w1, spec.input_dim, spec.hidden_units);
    const std::size_t w2_offset = w1 + spec.hidden_units;
    fill_glorot(w + w2_offset,
                static_cast<std::size_t>(spec.num_classes) * spec.hidden_units,
                spec.hidden_units, spec.num_classes);
  }
  return model;
}

std::vector<double> Logits(const ModelVector& model, const double* features) {
  const ModelSpec& spec = model.spec;
  std::vector<double> logits(spec.num_classes);
  if (spec.arch == ModelArch::kMultinomialLogistic) {
    const double* w = model.weights.data();
    const double* bias =
        w + static_cast<std::size_t>(spec.num_classes) * spec.input_dim;
    for (int c = 0; c < spec.num_classes; ++c) {
      double acc = bias[c];
      const double* row = w + static_cast<std::size_t>(c) * spec.input_dim;
      for (int j = 0; j < spec.input_dim; ++j) acc += row[j] * features[j];
      logits[c] = acc;
    }
    return logits;
  }
  std::vector<double> z = MlpPreActivations(model, features);
  const std::size_t w2_offset =
      static_cast<std::size_t>(spec.hidden_units) * spec.input_dim +
      spec.hidden_units;
  const double* w2 = model.weights.data() + w2_offset;
  const double* b2 =
      w2 + static_cast<std::size_t>(spec.num_classes) * spec.hidden_units;
  for (int c = 0; c < spec.num_classes; ++c) {
    double acc = b2[c];
    const double* row = w2 + static_cast<std::size_t>(c) * spec.hidden_units;
    for (int h = 0; h < spec.hidden_units; ++h) {
      acc += row[h] * std::max(z[h], 0.0);
    }
    logits[c] = acc;
  }
  return logits;
}

double ExampleLoss(const ModelVector& model, const double* features,
                   int label) {
  CheckLabel(model.spec, label);
  std::vector<double> logits = Logits(model, features);
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double logit : logits) sum += std::exp(logit - top);
  return top + std::log(sum) - logits[label];
}

int Predict(const ModelVector& model, const double* features) {
  std::vector<double> logits = Logits(model, features);
  return static_cast<int>(
      std::max_element(logits.begin(), logits.end()) - logits.begin());
}

void PerSampleGradient(const ModelVector& model, const double* features,
                       int label, std::vector<double>& grad) {
  const ModelSpec& spec = model.spec;
  CheckLabel(spec, label);
  if (static_cast<int>(model.weights.size()) != spec.Dimension()) {
    throw InvalidParameterError(
        "PerSampleGradient: weight vector does not match the architecture "
        "dimension");
  }
  grad.assign(model.weights.size(), 0.0);

  if (spec.arch == ModelArch::kMultinomialLogistic) {
    std::vector<double> dlogits = Softmax(Logits(model, features));
    dlogits[label] -= 1.0;
    double* dw = grad.data();
    double* dbias =
        dw + static_cast<std::size_t>(spec.num_classes) * spec.input_dim;
    for (int c = 0; c < spec.num_classes; ++c) {
      double* row = dw + static_cast<std::size_t>(c) * spec.input_dim;
      for (int j = 0; j < spec.input_dim; ++j) {
        row[j] = dlogits[c] * features[j];
      }
      dbias[c] = dlogits[c];
    }
    return;
  }

  std::vector<double> z = MlpPreActivations(model, features);
  std::vector<double> a(z.size());
  for (std::size_t h = 0; h < z.size(); ++h) a[h] = std::max(z[h], 0.0);

  const std::size_t w1_count =
      static_cast<std::size_t>(spec.hidden_units) * spec.input_dim;
  const std::size_t w2_offset = w1_count + spec.hidden_units;
  const double* w2 = model.weights.data() + w2_offset;

  std::vector<double> logits(spec.num_classes);
  const double* b2 =
      w2 + static_cast<std::size_t>(spec.num_classes) * spec.hidden_units;
  for (int c = 0; c < spec.num_classes; ++c) {
    double acc = b2[c];
    const double* row = w2 + static_cast<std::size_t>(c) * spec.hidden_units;
    for (int h = 0; h < spec.hidden_units; ++h) acc += row[h] * a[h];
    logits[c] = acc;
  }
  std::vector<double> dlogits = Softmax(logits);
  dlogits[label] -= 1.0;

  double* dw1 = grad.data();
  double* db1 = dw1 + w1_count;
  double* dw2 = grad.data() + w2_offset;
  double* db2 =
      dw2 + static_cast<std::size_t>(spec.num_classes) * spec.hidden_units;

  std::vector<double> da(spec.hidden_units, 0.0);
  for (int c = 0; c < spec.num_classes; ++c) {
    double* row = dw2 + static_cast<std::size_t>(c) * spec.hidden_units;
    const double* w2_row =
        w2 + static_cast<std::size_t>(c) * spec.hidden_units;
    for (int h = 0; h < spec.hidden_units; ++h) {
      row[h] = dlogits[c] * a[h];
      da[h] += dlogits[c] * w2_row[h];
    }
    db2[c] = dlogits[c];
  }
  for (int h = 0; h < spec.hidden_units; ++h) {
    const double dz = z[h] > 0.0 ? da[h] : 0.0;
    double* row = dw1 + static_cast<std::size_t>(h) * spec.input_dim;
    for (int j = 0; j < spec.input_dim; ++j) row[j] = dz * features[j];
    db1[h] = dz;
  }
}

void ClipGradient(std::vector<double>& v, double clip_norm) {
  if (!(clip_norm > 0.0)) {
    throw InvalidParameterError("ClipGradient: clip_norm must be > 0");
  }
  if (std::isinf(clip_norm)) return;
  double norm_sq = 0.0;
  for (double x : v) norm_sq += x * x;
  const double norm = std::sqrt(norm_sq);
  if (norm <= clip_norm) return;
  const double scale = clip_norm / norm;
  for (double& x : v) x *= scale;
}

double Accuracy(const ModelVector& model, const LabeledDataset& data,
                const std::vector<int>& indices) {
  if (indices.empty()) {
    throw InvalidParameterError("Accuracy: indices must be nonempty");
  }
  int correct = 0;
  for (int i : indices) {
    if (Predict(model, data.row(i)) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / indices.size();
}

double Accuracy(const ModelVector& model, const LabeledDataset& data) {
  std::vector<int> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  return Accuracy(model, data, all);
}

double MeanLoss(const ModelVector& model, const LabeledDataset& data,
                const std::vector<int>& indices) {
  if (indices.empty()) {
    throw InvalidParameterError("MeanLoss: indices must be nonempty");
  }
  double total = 0.0;
  for (int i : indices) total += ExampleLoss(model, data.row(i), data.labels[i]);
  return total / indices.size();
}

double MeanLoss(const ModelVector& model, const LabeledDataset& data) {
  std::vector<int> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  return MeanLoss(model, data, all);
}

namespace {
constexpr char kModelHeader[] = "# model v1";
}

void WriteModelFile(const ModelVector& model, std::ostream& out) {
  out << kModelHeader << '\n';
  out << "arch " << ModelArchName(model.spec.arch) << '\n';
  out << "input_dim " << model.spec.input_dim << '\n';
  out << "num_classes " << model.spec.num_classes << '\n';
  out << "hidden_units " << model.spec.hidden_units << '\n';
  out << "weights " << model.weights.size() << '\n';
  char line[40];
  for (double w : model.weights) {
    std::snprintf(line, sizeof(line), "%.17g\n", w);
    out << line;
  }
}

void WriteModelFile(const ModelVector& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("WriteModelFile: cannot open " + path);
  }
  WriteModelFile(model, out);
}

ModelVector ReadModelFile(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header != kModelHeader) {
    throw ParseError("ReadModelFile: missing '# model v1' header");
  }
  ModelSpec spec;
  std::size_t count = 0;
  auto read_field = [&in](const std::string& key) {
    std::string line;
    if (!std::getline(in, line)) {
      throw ParseError("ReadModelFile: truncated file at field " + key);
    }
    std::istringstream row(line);
    std::string name, value;
    if (!(row >> name >> value) || name != key) {
      throw ParseError("ReadModelFile: expected field " + key + ", got '" +
                       line + "'");
    }
    return value;
  };
  spec.arch = ParseModelArch(read_field("arch"));
  spec.input_dim = std::stoi(read_field("input_dim"));
  spec.num_classes = std::stoi(read_field("num_classes"));
  spec.hidden_units = std::stoi(read_field("hidden_units"));
  count = std::stoul(read_field("weights"));
  if (static_cast<int>(count) != spec.Dimension()) {
    throw ParseError(
        "ReadModelFile: weights count does not match the architecture "
        "dimension");
  }
  ModelVector model{spec, std::vector<double>(count)};
  for (std::size_t k = 0; k < count; ++k) {
    if (!(in >> model.weights[k])) {
      throw ParseError("ReadModelFile: truncated weight list");
    }
  }
  return model;
}

ModelVector ReadModelFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("ReadModelFile: cannot open " + path);
  }
  return ReadModelFile(in);
}

}  // namespace fedgdp
