// Copyright 2026 The alcost Authors
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

namespace alcost {

// Root of every error the library throws. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or precondition (bad sizes, N < 2, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A value type invariant does not hold.
class InvariantError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Container / checkpoint decoding failures. The three subclasses let callers
// tell a wrong file from a truncated one from one holding invalid values.
class LoadError : public Error {
 public:
  using Error::Error;
};

class HeaderError : public LoadError {
 public:
  using LoadError::LoadError;
};

class PayloadError : public LoadError {
 public:
  using LoadError::LoadError;
};

class RangeError : public LoadError {
 public:
  using LoadError::LoadError;
};

// Least-squares fit could not be computed (rank deficient, ill-conditioned).
class FitError : public Error {
 public:
  using Error::Error;
};

// A metric is undefined for the given input (e.g. AP without positives).
class MetricError : public Error {
 public:
  using Error::Error;
};

// Knapsack table would exceed the configured cell ceiling.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Something that cannot happen mathematically happened.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace alcost
