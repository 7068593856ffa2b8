// Copyright 2026 The copyaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COPYAUG_ERROR_H_
#define COPYAUG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace copyaug {

enum class ErrorCode {
  kFormat,     // input does not parse under the named format
  kConfig,     // bad configuration (unknown slot, invalid manifest, ...)
  kArgument,   // precondition violated by the caller
  kIo,         // file could not be opened / written
  kNumeric,    // NaN or Inf during training
};

std::string_view ErrorCodeName(ErrorCode code);

// Process exit status used by the CLI for each code.
int ErrorExitStatus(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace copyaug

#endif  // COPYAUG_ERROR_H_
