// Copyright 2026 The JDOT Authors
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

// RAII wrappers over the C handles plus status -> exit code mapping.

#ifndef JDOT_TOOLS_JDOT_CLI_HANDLES_HPP_
#define JDOT_TOOLS_JDOT_CLI_HANDLES_HPP_

#include <memory>
#include <stdexcept>
#include <string>

#include "jdot/jdot_c.h"

namespace jdot_cli {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitData = 3,
  kExitSolver = 4,
};

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

inline int ExitCodeFor(jdot_status status) {
  switch (status) {
    case JDOT_OK:
      return kExitOk;
    case JDOT_ERR_INVALID_ARGUMENT:
      return kExitUsage;
    case JDOT_ERR_DATA:
      return kExitData;
    case JDOT_ERR_SOLVER:
      return kExitSolver;
    default:
      return kExitInternal;
  }
}

// Must run on the thread that made the failing call (the error is thread local).
inline void Check(jdot_status status, const std::string& context) {
  if (status != JDOT_OK) {
    throw CliError(ExitCodeFor(status), context + ": " + jdot_last_error());
  }
}

struct DatasetDeleter {
  void operator()(jdot_dataset* p) const { jdot_dataset_free(p); }
};
struct ModelDeleter {
  void operator()(jdot_model* p) const { jdot_model_free(p); }
};
struct ResultDeleter {
  void operator()(jdot_result* p) const { jdot_result_free(p); }
};
struct StringDeleter {
  void operator()(char* p) const { jdot_string_free(p); }
};

using Dataset = std::unique_ptr<jdot_dataset, DatasetDeleter>;
using Model = std::unique_ptr<jdot_model, ModelDeleter>;
using Result = std::unique_ptr<jdot_result, ResultDeleter>;
using OwnedString = std::unique_ptr<char, StringDeleter>;

}  // namespace jdot_cli

#endif  // JDOT_TOOLS_JDOT_CLI_HANDLES_HPP_
