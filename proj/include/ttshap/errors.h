/*
 * Copyright 2026 The ttshap Authors.
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

#ifndef TTSHAP_ERRORS_H_
#define TTSHAP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ttshap {

// Every failure raised by the library derives from Error. The category maps
// onto the CLI exit codes.
enum class ErrorCategory {
  kShape,
  kIndex,
  kValidation,
  kResource,
  kConsistency,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& prefix, const std::string& detail)
      : std::runtime_error(prefix + detail), category_(category), detail_(detail) {}

  ErrorCategory category() const { return category_; }
  // Message without the category prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCategory category_;
  std::string detail_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& message)
      : Error(ErrorCategory::kShape, "shape error: ", message) {}
};

class IndexError : public Error {
 public:
  explicit IndexError(const std::string& message)
      : Error(ErrorCategory::kIndex, "index error: ", message) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorCategory::kValidation, "validation error: ", message) {}
};

// A configured size cap (dense materialization, enumeration, bond) would be
// exceeded.
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& message)
      : Error(ErrorCategory::kResource, "resource error: ", message) {}
};

// An internal identity that must hold by construction did not.
class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& message)
      : Error(ErrorCategory::kConsistency, "consistency error: ", message) {}
};

// Rethrows e as the same error type with "context: " in front of its detail.
[[noreturn]] inline void rethrow_with_context(const Error& e, const std::string& context) {
  const std::string detail = context + ": " + e.detail();
  switch (e.category()) {
    case ErrorCategory::kShape:
      throw ShapeError(detail);
    case ErrorCategory::kIndex:
      throw IndexError(detail);
    case ErrorCategory::kValidation:
      throw ValidationError(detail);
    case ErrorCategory::kResource:
      throw ResourceError(detail);
    case ErrorCategory::kConsistency:
      break;
  }
  throw ConsistencyError(detail);
}

}  // namespace ttshap

#endif  // TTSHAP_ERRORS_H_
