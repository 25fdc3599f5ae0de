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

#include "fedgdp/dataset.h"

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <random>

#include "fedgdp/errors.h"
#include "fedgdp/rng.h"

namespace fedgdp {
namespace {

constexpr uint32_t kImageMagic = 0x00000803;
constexpr uint32_t kLabelMagic = 0x00000801;

uint32_t ReadBigEndianU32(std::istream& in, const std::string& field) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw ParseError("LoadIdxDataset: truncated file while reading " + field);
  }
  return (static_cast<uint32_t>(bytes[0]) << 24) |
         (static_cast<uint32_t>(bytes[1]) << 16) |
         (static_cast<uint32_t>(bytes[2]) << 8) |
         static_cast<uint32_t>(bytes[3]);
}

std::vector<unsigned char> ReadPayload(std::istream& in, std::size_t count,
                                       const std::string& field) {
  std::vector<unsigned char> payload(count);
  if (!in.read(reinterpret_cast<char*>(payload.data()),
               static_cast<std::streamsize>(count))) {
    throw ParseError("LoadIdxDataset: truncated file while reading " + field);
  }
  return payload;
}

}  // namespace

void LabeledDataset::Validate() const {
  if (num_features <= 0) {
    throw InvalidParameterError("LabeledDataset: num_features must be > 0");
  }
  if (num_classes <= 0) {
    throw InvalidParameterError("LabeledDataset: num_classes must be > 0");
  }
  if (features.size() !=
      labels.size() * static_cast<std::size_t>(num_features)) {
    throw InvalidParameterError(
        "LabeledDataset: features size must equal labels size times "
        "num_features");
  }
  for (int label : labels) {
    if (label < 0 || label >= num_classes) {
      throw InvalidParameterError(
          "LabeledDataset: labels must lie in [0, num_classes)");
    }
  }
  for (double v : features) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidParameterError(
          "LabeledDataset: features must lie in [0, 1]");
    }
  }
}

LabeledDataset LoadIdxDataset(const std::string& images_path,
                              const std::string& labels_path) {
  std::ifstream images(images_path, std::ios::binary);
  if (!images) {
    throw ParseError("LoadIdxDataset: cannot open images file " +
                     images_path);
  }
  uint32_t image_magic = ReadBigEndianU32(images, "image magic");
  if (image_magic != kImageMagic) {
    throw ParseError("LoadIdxDataset: bad image magic (expected 0x00000803)");
  }
  uint32_t image_count = ReadBigEndianU32(images, "image count");
  uint32_t rows = ReadBigEndianU32(images, "image rows");
  uint32_t cols = ReadBigEndianU32(images, "image cols");
  std::vector<unsigned char> pixels = ReadPayload(
      images, static_cast<std::size_t>(image_count) * rows * cols,
      "image pixels");

  std::ifstream labels(labels_path, std::ios::binary);
  if (!labels) {
    throw ParseError("LoadIdxDataset: cannot open labels file " +
                     labels_path);
  }
  uint32_t label_magic = ReadBigEndianU32(labels, "label magic");
  if (label_magic != kLabelMagic) {
    throw ParseError("LoadIdxDataset: bad label magic (expected 0x00000801)");
  }
  uint32_t label_count = ReadBigEndianU32(labels, "label count");
  if (label_count != image_count) {
    throw ParseError(
        "LoadIdxDataset: image/label count mismatch between files");
  }
  std::vector<unsigned char> raw_labels =
      ReadPayload(labels, label_count, "label bytes");

  LabeledDataset data;
  data.num_features = static_cast<int>(rows * cols);
  data.features.resize(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    data.features[i] = pixels[i] / 255.0;
  }
  data.labels.assign(raw_labels.begin(), raw_labels.end());
  int max_label = 0;
  for (int label : data.labels) max_label = std::max(max_label, label);
  data.num_classes = max_label + 1;
  return data;
}

LabeledDataset SynthDataset(int num_classes, int dim, int per_class,
                            double spread, uint64_t seed) {
  if (num_classes <= 0 || dim <= 0 || per_class <= 0) {
    throw InvalidParameterError(
        "SynthDataset: num_classes, dim, and per_class must be > 0");
  }
  if (!(spread >= 0.0)) {
    throw InvalidParameterError("SynthDataset: spread must be >= 0");
  }
  const int total = num_classes * per_class;
  LabeledDataset data;
  data.num_features = dim;
  data.num_classes = num_classes;
  data.features.resize(static_cast<std::size_t>(total) * dim);
  data.labels.resize(total);

  std::mt19937_64 rng =
      MakeSubstream(seed, 0, kServerStream, RngPurpose::kSynthData);
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  const double lo = -4.0;
  const double scale = 1.0 / (spread + 8.0);
  for (int i = 0; i < total; ++i) {
    const int label = i % num_classes;
    data.labels[i] = label;
    double* row = data.features.data() + static_cast<std::size_t>(i) * dim;
    for (int j = 0; j < dim; ++j) {
      const double mean = (j % num_classes == label) ? spread : 0.0;
      const double value = mean + unit_normal(rng);
      row[j] = std::clamp((value - lo) * scale, 0.0, 1.0);
    }
  }
  return data;
}

LabeledDataset Subset(const LabeledDataset& data,
                      const std::vector<int>& indices) {
  LabeledDataset out;
  out.num_features = data.num_features;
  out.num_classes = data.num_classes;
  out.features.reserve(indices.size() *
                       static_cast<std::size_t>(data.num_features));
  out.labels.reserve(indices.size());
  for (int index : indices) {
    if (index < 0 || index >= data.size()) {
      throw InvalidParameterError("Subset: index out of range");
    }
    const double* row = data.row(index);
    out.features.insert(out.features.end(), row, row + data.num_features);
    out.labels.push_back(data.labels[index]);
  }
  return out;
}

}  // namespace fedgdp
