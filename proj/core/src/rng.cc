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

#include "fedgdp/rng.h"

namespace fedgdp {
namespace {

// SplitMix64 finalizer; full-period 64-bit mixer.
std::uint64_t Mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t SubstreamSeed(std::uint64_t root_seed, std::uint64_t round,
                            std::uint64_t client_id, RngPurpose purpose) {
  std::uint64_t h = Mix(root_seed);
  h = Mix(h ^ round);
  h = Mix(h ^ client_id);
  h = Mix(h ^ static_cast<std::uint64_t>(purpose));
  return h;
}

std::mt19937_64 MakeSubstream(std::uint64_t root_seed, std::uint64_t round,
                              std::uint64_t client_id, RngPurpose purpose) {
  return std::mt19937_64(SubstreamSeed(root_seed, round, client_id, purpose));
}

}  // namespace fedgdp
