// Copyright 2026 The bellst Authors
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

#ifndef BELLST_ERRORS_HPP
#define BELLST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bellst {

/// Raised for malformed or out-of-range user configuration. The CLI maps
/// this (and std::invalid_argument from precondition checks) to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

/// Raised when an iterative numeric routine fails to converge or produces a
/// result outside its validity tolerances. CLI exit code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string &what) : std::runtime_error(what) {}
};

/// Raised on filesystem failures (unreadable input, unwritable output).
/// CLI exit code 4.
struct IoError : std::runtime_error {
    explicit IoError(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace bellst

#endif
