// Copyright 2026 The nodescan Authors. All Rights Reserved.
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

#ifndef NODESCAN_ERROR_HPP
#define NODESCAN_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace nodescan {

enum class ErrorCode {
  kInvalidName,
  kInvalidFqn,
  kMalformedJson,
  kMissingField,
  kConflictingDeclaration,
  kUnsupportedLockfile,
  kDanglingDependency,
  kMissingNodeModules,
  kMissingManifest,
  kRootMismatch,
  kNoCodeChange,
  kDuplicateVulnId,
  kIo,
  kEmptyInput,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidName: return "invalid-name";
    case ErrorCode::kInvalidFqn: return "invalid-fqn";
    case ErrorCode::kMalformedJson: return "malformed-json";
    case ErrorCode::kMissingField: return "missing-field";
    case ErrorCode::kConflictingDeclaration: return "conflicting-declaration";
    case ErrorCode::kUnsupportedLockfile: return "unsupported-lockfile";
    case ErrorCode::kDanglingDependency: return "dangling-dependency";
    case ErrorCode::kMissingNodeModules: return "missing-node-modules";
    case ErrorCode::kMissingManifest: return "missing-manifest";
    case ErrorCode::kRootMismatch: return "root-mismatch";
    case ErrorCode::kNoCodeChange: return "no-code-change";
    case ErrorCode::kDuplicateVulnId: return "duplicate-vuln-id";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kEmptyInput: return "empty-input";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable code so
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nodescan

#endif  // NODESCAN_ERROR_HPP
