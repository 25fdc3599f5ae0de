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

#ifndef FEDGDP_ERRORS_H_
#define FEDGDP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fedgdp {

// Raised when a caller-supplied parameter violates a documented precondition.
// The message names the offending parameter.
class InvalidParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an input file or document cannot be decoded. The message names
// the offending field (magic number, count, ...).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a requested data partition cannot be drawn from the pool even
// after the bounded number of retries.
class PartitionInfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fedgdp

#endif  // FEDGDP_ERRORS_H_
