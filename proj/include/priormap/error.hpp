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

#ifndef PRIORMAP__ERROR_HPP_
#define PRIORMAP__ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace priormap
{
enum class ErrorCode {
  kInvalidArgument,
  kDegenerateGeometry,
  kNonFinite,
  kOverflow,
  kCorruptInput,
  kIo,
  kSyntax,
  kVersion,
  kClassTag,
  kCanonicalForm,
  kDuplicateId,
  kIntegrity,
};

std::string_view to_string(ErrorCode code) noexcept;

/**
 * @brief Exception carrying a machine-readable error code.
 */
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string & message)
  : std::runtime_error(message), code_(code)
  {
  }

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string & message);
}  // namespace priormap

#endif  // PRIORMAP__ERROR_HPP_
