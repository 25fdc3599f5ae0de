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

#ifndef FEDGDP_RNG_H_
#define FEDGDP_RNG_H_

#include <cstdint>
#include <random>

namespace fedgdp {

// Substream identifier passed by all randomized federation steps. Each
// (root seed, round, client, purpose) tuple owns an independent stream, so
// per-client work can run on any number of workers without changing results.
enum class RngPurpose : std::uint64_t {
  kClientSampling = 1,
  kBatchSampling = 2,
  kStepNoise = 3,
  kModelInit = 4,
  kPartition = 5,
  kSynthData = 6,
};

// Server-side streams (client sampling, model init) use this client id.
inline constexpr std::uint64_t kServerStream = ~std::uint64_t{0};

// Stable mixing of the stream coordinates into a 64-bit seed. Pure function
// of its inputs; identical across platforms and runs.
std::uint64_t SubstreamSeed(std::uint64_t root_seed, std::uint64_t round,
                            std::uint64_t client_id, RngPurpose purpose);

std::mt19937_64 MakeSubstream(std::uint64_t root_seed, std::uint64_t round,
                              std::uint64_t client_id, RngPurpose purpose);

}  // namespace fedgdp

#endif  // FEDGDP_RNG_H_
