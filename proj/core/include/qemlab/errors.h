// Copyright 2026 The qemlab Authors
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

#ifndef QEMLAB_ERRORS_H
#define QEMLAB_ERRORS_H

#include <stdexcept>

namespace qemlab {

/// Raised when a request exceeds a hard resource cap (e.g. simulator qubit limit).
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised for malformed or inconsistent configuration input. The CLI maps this to exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a parsed file (CSV, JSON) does not match its schema.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qemlab

#endif
