// Copyright (c) 2026 The ouvls Authors. All Rights Reserved.
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

namespace ouvls {

enum class ErrorCode {
  kInvalidArgument,
  kDomain,      // input outside the mathematical domain of an operation
  kIo,          // file missing or unreadable
  kFormat,      // malformed file content
  kConfig,      // unusable configuration or missing required column
  kTraining,    // divergence or an empty split
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_domain(const std::string& what) {
  throw Error(ErrorCode::kDomain, what);
}

[[noreturn]] inline void throw_config(const std::string& what) {
  throw Error(ErrorCode::kConfig, what);
}

[[noreturn]] inline void throw_io(const std::string& what) {
  throw Error(ErrorCode::kIo, what);
}

[[noreturn]] inline void throw_format(const std::string& what) {
  throw Error(ErrorCode::kFormat, what);
}

}  // namespace ouvls
