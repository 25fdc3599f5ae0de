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
// Labeled datasets: in-memory representation, IDX binary ingestion, and a
// synthetic Gaussian-cluster generator for desk-scale experiments.

#ifndef FEDGDP_DATASET_H_
#define FEDGDP_DATASET_H_

#include <cstdint>
#include <string>
#include <vector>

namespace fedgdp {

// A dense labeled dataset. Features are row-major with one row per example,
// values normalized to [0,1]; labels are class ids in [0, num_classes).
struct LabeledDataset {
  int num_features = 0;
  int num_classes = 0;
  std::vector<double> features;  // size() == labels.size() * num_features
  std::vector<int> labels;

  int size() const { return static_cast<int>(labels.size()); }
  const double* row(int i) const {
    return features.data() + static_cast<std::size_t>(i) * num_features;
  }

  // Throws InvalidParameterError on shape mismatch, out-of-range labels, or
  // feature values outside [0,1].
  void Validate() const;
};

// Loads a dataset from a pair of IDX files (the MNIST container format):
// big-endian headers, image magic 0x00000803 with dimensions
// count x rows x cols, label magic 0x00000801 with a matching count. Pixel
// bytes are scaled to [0,1]; num_classes is 1 + the largest label. Throws
// ParseError naming the offending field on bad magic, truncation, or an
// image/label count mismatch.
LabeledDataset LoadIdxDataset(const std::string& images_path,
                              const std::string& labels_path);

// Synthetic Gaussian-cluster dataset: per_class examples for each of
// num_classes classes, example i carrying label i % num_classes. Class c has
// unit-variance Gaussian features centered at `spread` on the coordinates
// {j : j % num_classes == c} and 0 elsewhere, so larger spread means more
// separable classes. Features are mapped to [0,1] by the fixed affine map of
// [-4, spread + 4] (then clamped), which keeps independently generated train
// and test pools identically distributed. Deterministic under seed.
LabeledDataset SynthDataset(int num_classes, int dim, int per_class,
                            double spread, uint64_t seed);

// The rows of `data` selected by `indices`, in order.
LabeledDataset Subset(const LabeledDataset& data,
                      const std::vector<int>& indices);

}  // namespace fedgdp

#endif  // FEDGDP_DATASET_H_
