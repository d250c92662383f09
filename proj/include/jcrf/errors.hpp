// Copyright 2026 The jcrf Authors.
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

namespace jcrf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed role inventory (duplicate names, missing Verb/Outside role).
class InventoryError : public Error {
 public:
  using Error::Error;
};

/// A name refers to a role that no inventory defines.
class ReferenceError : public Error {
 public:
  using Error::Error;
};

/// Sequences that must share a length do not.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// Training or decoding input is inconsistent with what the operation needs.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A constraint leaves no admissible label (or no admissible path).
class InfeasibleError : public DataError {
 public:
  using DataError::DataError;
};

/// Input file could not be parsed. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace jcrf
