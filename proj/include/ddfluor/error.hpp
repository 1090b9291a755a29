// Copyright 2026 The ddfluor Authors
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

namespace ddf {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (R = 0, Ω_22 = 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Measured data that no admissible parameter set can produce.
class InconsistentInputError : public Error {
public:
    using Error::Error;
};

/// Solver breakdown: unstable step size, singular system, missing null space.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Output files or directories that cannot be written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed or invalid run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace ddf
