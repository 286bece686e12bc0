// Copyright 2026 The memdec Authors
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

#ifndef MEMDEC_ERRORS_H
#define MEMDEC_ERRORS_H

#include <stdexcept>
#include <string>
#include <vector>

namespace memdec {

/// Raised when a computation produces or receives non-finite values.
class NumericError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Raised when a fit or estimate has too few usable points.
class InsufficientDataError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Raised for configurations that are formally valid but make the method meaningless
/// (p_drop = 1, a monomial fit with exponent exactly 1, ...).
class DegenerateError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Raised when a persisted file is truncated or has a bad magic number.
class CorruptFileError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Raised when a persisted file was written by a different format version.
class VersionMismatchError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Raised by config validation. Carries every violation found in one pass.
class ConfigError : public std::runtime_error {
   public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string> &problems() const {
        return problems_;
    }

   private:
    std::vector<std::string> problems_;
};

}  // namespace memdec

#endif
