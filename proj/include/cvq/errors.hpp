// Copyright 2026 The cvq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace cvq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched cutoffs, wrong number of modes, cutoff below the minimum.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input violates a documented precondition (non-Hermitian generator,
// unnormalized state, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised when probability weight reaches the top of the truncated Fock
/// space. `step` is the index of the gate application that tripped the
/// guard (-1 for state construction).
class TruncationUnsafe : public Error {
 public:
  TruncationUnsafe(const std::string& what, int step, double leakage)
      : Error(what), step_(step), leakage_(leakage) {}

  int step() const noexcept { return step_; }
  double leakage() const noexcept { return leakage_; }

 private:
  int step_;
  double leakage_;
};

}  // namespace cvq
