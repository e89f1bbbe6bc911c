// Copyright 2026 The priormap Authors
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

#include "priormap/error.hpp"

namespace priormap
{
std::string_view to_string(ErrorCode code) noexcept
{
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kDegenerateGeometry:
      return "degenerate-geometry";
    case ErrorCode::kNonFinite:
      return "non-finite";
    case ErrorCode::kOverflow:
      return "overflow";
    case ErrorCode::kCorruptInput:
      return "corrupt-input";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kSyntax:
      return "syntax";
    case ErrorCode::kVersion:
      return "version";
    case ErrorCode::kClassTag:
      return "class-tag";
    case ErrorCode::kCanonicalForm:
      return "canonical-form";
    case ErrorCode::kDuplicateId:
      return "duplicate-id";
    case ErrorCode::kIntegrity:
      return "integrity";
  }
  return "unknown";
}

void raise(ErrorCode code, const std::string & message)
{
  throw Error(code, std::string(to_string(code)) + ": " + message);
}
}  // namespace priormap
