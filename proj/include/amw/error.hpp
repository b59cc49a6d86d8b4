// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The amw Authors
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

namespace amw {

// Base of every error raised by the library. The C API maps each subclass to
// a stable status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument, precondition violation, or inconsistent inputs.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed file content (bad magic, version mismatch, truncation, bad cell).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss, gradient or parameter.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace amw
