/*
 * Copyright 2026 The samforge Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SAMFORGE_ERRORS_H_
#define SAMFORGE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace samforge {

enum class ErrorKind {
  kConfiguration,
  kGeneration,
  kGenerationExhausted,
  kUnanswerable,
  kConsistency,
  kDoubleModification,
  kNotApplicable,
  kUndefinedMetric,
  kSplit,
  kParse,
  kIo,
};

const char* ErrorKindName(ErrorKind kind);

// Single exception type for the library. Callers that need to branch on the
// failure class inspect kind(); the CLI maps kinds onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfiguration: return "configuration error";
    case ErrorKind::kGeneration: return "generation error";
    case ErrorKind::kGenerationExhausted: return "generation exhausted";
    case ErrorKind::kUnanswerable: return "unanswerable";
    case ErrorKind::kConsistency: return "consistency error";
    case ErrorKind::kDoubleModification: return "double modification";
    case ErrorKind::kNotApplicable: return "not applicable";
    case ErrorKind::kUndefinedMetric: return "undefined metric";
    case ErrorKind::kSplit: return "split error";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kIo: return "i/o error";
  }
  return "error";
}

}  // namespace samforge

#endif  // SAMFORGE_ERRORS_H_
