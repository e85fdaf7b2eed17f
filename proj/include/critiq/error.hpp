// Copyright 2026 The critiq Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace critiq {

// Malformed input text; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input whose values are out of the accepted domain.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// External ids that could not be resolved against an existing id map.
class ResolutionError : public std::runtime_error {
 public:
  ResolutionError(const std::string& what, std::vector<std::string> offenders)
      : std::runtime_error(what), offenders_(std::move(offenders)) {}

  const std::vector<std::string>& offenders() const { return offenders_; }

 private:
  std::vector<std::string> offenders_;
};

// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Checkpoint container problems: bad magic, version, digest or truncation.
class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation on a session that has already been closed.
class SessionClosedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training produced a non-finite loss or gradient.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace critiq
