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

#include "amw/types.hpp"

#include <string>

#include "amw/error.hpp"

namespace amw {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kBaseline:
      return "baseline";
    case Mode::kAmbiguity:
      return "ambiguity";
    case Mode::kEvidential:
      return "evidential";
  }
  return "unknown";
}

Mode parse_mode(std::string_view text) {
  if (text == "baseline") return Mode::kBaseline;
  if (text == "ambiguity") return Mode::kAmbiguity;
  if (text == "evidential") return Mode::kEvidential;
  throw ValidationError("unknown mode '" + std::string(text) +
                        "' (expected baseline, ambiguity or evidential)");
}

}  // namespace amw
