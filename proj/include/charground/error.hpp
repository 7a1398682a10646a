// Copyright 2026 The CharGround Authors.
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

#ifndef CHARGROUND_ERROR_HPP_
#define CHARGROUND_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace charground {

enum class ErrorCode {
  kParameter,  // caller passed an invalid argument or configuration
  kData,       // input data is inconsistent (dimensions, missing embeddings)
  kParse,      // malformed file syntax
  kSchema,     // well-formed file violating the schema or model invariants
  kIo,         // file system failure
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void throw_parameter(const std::string& message);
[[noreturn]] void throw_data(const std::string& message);

}  // namespace charground

#endif  // CHARGROUND_ERROR_HPP_
