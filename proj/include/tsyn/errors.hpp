// Copyright 2026 The tsyn developers
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

namespace tsyn {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad user input (malformed unitary, angle, flag value).
struct InputError : Error {
  using Error::Error;
};

/// Table file is unreadable: bad magic, truncation, checksum mismatch.
struct CorruptTableError : Error {
  using Error::Error;
};

/// Table file has an unsupported version or gate-set id.
struct VersionError : Error {
  using Error::Error;
};

/// Enumeration would exceed the configured memory cap.
struct BudgetExceededError : Error {
  using Error::Error;
};

/// Brute-force search space exceeds its hard cap.
struct TooLargeError : Error {
  using Error::Error;
};

/// Sampling was requested on an MPS that is not in canonical form.
struct NotCanonicalError : Error {
  using Error::Error;
};

/// All sampling mass vanished; caller should re-attempt.
struct DegenerateDistributionError : Error {
  using Error::Error;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

/// SVD iteration failed to converge (never silently wrong).
struct ConvergenceError : Error {
  using Error::Error;
};

/// Not enough sweep structure for a fit (fewer than 3 rates, or no
/// interior minimum).
struct InsufficientDataError : Error {
  using Error::Error;
};

/// Circuit-text syntax error with location info.
struct ParseError : Error {
  ParseError(const std::string& msg, int line, int col)
      : Error(msg + " at line " + std::to_string(line) + ", column " +
              std::to_string(col)),
        line(line),
        col(col) {}
  int line;
  int col;
};

}  // namespace tsyn
