// Copyright 2026 The adress-baseline Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADRESS_COMMON_ERROR_HPP_
#define ADRESS_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace adress {

// Broad failure classes. The numeric values double as CLI exit codes.
enum class ErrorCategory {
  kUsage = 1,
  kData = 2,
  kNumerical = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message)
      : Error(ErrorCategory::kUsage, message) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& message)
      : Error(ErrorCategory::kData, message) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& message)
      : Error(ErrorCategory::kNumerical, message) {}
};

// Throws the subclass matching `category`, so handlers keyed on the
// concrete type still fire after a message is rewrapped.
[[noreturn]] inline void throw_error(ErrorCategory category, const std::string& message) {
  switch (category) {
    case ErrorCategory::kUsage:
      throw UsageError(message);
    case ErrorCategory::kData:
      throw DataError(message);
    case ErrorCategory::kNumerical:
      break;
  }
  throw NumericalError(message);
}

}  // namespace adress

#endif  // ADRESS_COMMON_ERROR_HPP_
