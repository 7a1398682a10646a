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

#include "charground/error.hpp"

namespace charground {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParameter:
      return "parameter error";
    case ErrorCode::kData:
      return "data error";
    case ErrorCode::kParse:
      return "parse error";
    case ErrorCode::kSchema:
      return "schema error";
    case ErrorCode::kIo:
      return "i/o error";
  }
  return "error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

void throw_parameter(const std::string& message) {
  throw Error(ErrorCode::kParameter, message);
}

void throw_data(const std::string& message) {
  throw Error(ErrorCode::kData, message);
}

}  // namespace charground
