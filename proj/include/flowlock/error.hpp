// Copyright 2026 The Flowlock Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flowlock {

enum class ErrorCode {
  HeadOfDefinition,
  EmptyInstance,
  NotAnInstance,
  IllegalBinding,
  UnionInInstance,
  UnsupportedPredicate,
  DomainConflict,
  RedefinedRelation,
  ArityMismatch,
  NoSatisfiableBranch,
  UnknownDefinition,
  StepCapExceeded,
  UnknownChannel,
  SyntaxError,
  Unsupported,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::HeadOfDefinition: return "HeadOfDefinition";
    case ErrorCode::EmptyInstance: return "EmptyInstance";
    case ErrorCode::NotAnInstance: return "NotAnInstance";
    case ErrorCode::IllegalBinding: return "IllegalBinding";
    case ErrorCode::UnionInInstance: return "UnionInInstance";
    case ErrorCode::UnsupportedPredicate: return "UnsupportedPredicate";
    case ErrorCode::DomainConflict: return "DomainConflict";
    case ErrorCode::RedefinedRelation: return "RedefinedRelation";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::NoSatisfiableBranch: return "NoSatisfiableBranch";
    case ErrorCode::UnknownDefinition: return "UnknownDefinition";
    case ErrorCode::StepCapExceeded: return "StepCapExceeded";
    case ErrorCode::UnknownChannel: return "UnknownChannel";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

// Single exception type for the library; callers dispatch on code().
class FlowError : public std::runtime_error {
 public:
  FlowError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace flowlock
