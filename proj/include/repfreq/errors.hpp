// Copyright 2026 The repfreq Authors.
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

namespace repfreq {

/// Base class for every error raised by the library. The CLI maps these to
/// exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input documents (game files, distribution files, mixed actions).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Inputs that parse but violate a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition (e.g. Assumption checks).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Something that must not happen if the implementation is correct.
class InternalError : public Error {
 public:
  using Error::Error;
};

inline constexpr double kDefaultTol = 1e-9;

}  // namespace repfreq
