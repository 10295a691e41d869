// Copyright 2026 The pdbev Authors
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

namespace pdbev {

/// Base class for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or truncated tensor file. The message names the offending field.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A configuration file or parameter violates a documented invariant.
/// The message starts with the field path, e.g. `cameras[1].R: ...`.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Inputs are well formed but inconsistent with each other (shape
/// mismatch, empty view list, undefined loss, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pdbev
