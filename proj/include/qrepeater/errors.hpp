// Copyright 2026 The qrepeater Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qrep {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state violated the Bell-diagonal invariants (negative or unnormalized
/// populations).
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// Fidelity below 1/2; such pairs carry no distillable entanglement and are
/// never stored.
class Unclassifiable : public Error {
 public:
  using Error::Error;
};

class InfeasibleGenerationTime : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A circuit that should preserve Bell-diagonal form produced coherences.
class NonBellDiagonalResidual : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Structural violation in a protocol tree or protocol file.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace qrep
