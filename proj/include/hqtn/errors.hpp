// Copyright 2026 The hqtn Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Error taxonomy shared across the library. The CLI maps each class to a
 * distinct process exit code.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace hqtn {

/// Base class of all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed file contents: bad RIFF header, bad magic bytes, version mismatch.
class FormatError : public Error {
  public:
    using Error::Error;
};

/// Recognized container but unsupported encoding (e.g. a compressed WAV codec).
class UnsupportedError : public Error {
  public:
    using Error::Error;
};

/// Vector/matrix shape mismatch between caller and callee.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Qubit count outside the supported simulation range.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Invalid argument value (zero shots, bad ratios, ...).
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// Filesystem-level failure: missing file, short read, failed write.
class IoError : public Error {
  public:
    using Error::Error;
};

/// Numeric failure during optimization (NaN/inf loss).
class NumericError : public Error {
  public:
    using Error::Error;
};

/// Constraint set that cannot be satisfied (e.g. speaker split with too few speakers).
class InfeasibleError : public Error {
  public:
    using Error::Error;
};

} // namespace hqtn
