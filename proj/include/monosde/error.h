// Copyright 2026 The monosde Authors
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

#ifndef MONOSDE_ERROR_H_
#define MONOSDE_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace monosde {

// Base of every error raised by the library. Callers that only need to
// distinguish "bad input" from "the run blew up" can catch the two
// intermediate classes below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments: non-positive step sizes, out-of-range parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public ParameterError {
 public:
  DimensionError(const std::string& what, std::size_t expected,
                 std::size_t actual)
      : ParameterError(what + ": expected dimension " +
                       std::to_string(expected) + ", got " +
                       std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

// A theorem hypothesis required by a bound calculator or solver is violated.
class HypothesisError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class SingularSystemError : public Error {
 public:
  SingularSystemError(const std::string& what, long rank)
      : Error(what + " (numerical rank " + std::to_string(rank) + ")"),
        rank_(rank) {}
  long rank() const { return rank_; }

 private:
  long rank_;
};

// Iterates or states became non-finite or left the divergence radius.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, long step)
      : Error(what + " at step " + std::to_string(step)), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : Error(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace monosde

#endif  // MONOSDE_ERROR_H_
