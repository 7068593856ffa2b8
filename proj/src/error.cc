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

#include "copyaug/error.h"

namespace copyaug {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFormat:
      return "FORMAT_ERROR";
    case ErrorCode::kConfig:
      return "CONFIG_ERROR";
    case ErrorCode::kArgument:
      return "ARGUMENT_ERROR";
    case ErrorCode::kIo:
      return "IO_ERROR";
    case ErrorCode::kNumeric:
      return "NUMERIC_ERROR";
  }
  return "UNKNOWN_ERROR";
}

int ErrorExitStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFormat:
      return 3;
    case ErrorCode::kConfig:
      return 4;
    case ErrorCode::kArgument:
      return 5;
    case ErrorCode::kIo:
      return 6;
    case ErrorCode::kNumeric:
      return 7;
  }
  return 1;
}

}  // namespace copyaug
