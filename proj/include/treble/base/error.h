// Copyright 2026 The Treble Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TREBLE_BASE_ERROR_H_
#define TREBLE_BASE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace treble {

// Failure categories shared by every module. Names are stable; the CLI and the
// wire ERROR frames carry them as strings.
enum class ErrorCode {
  kSyntaxError,
  kDuplicateDecl,
  kUnresolvedName,
  kCyclicInheritance,
  kImportMissing,
  kInvalidType,
  kSpecSyntaxError,
  kUnknownTypeTag,
  kValueTooLarge,
  kTruncatedMessage,
  kUnknownTag,
  kTrailingBytes,
  kNotFound,
  kRegistryUnavailable,
  kAddressInUse,
  kIncompleteImplementation,
  kUnknownMethod,
  kTypeMismatch,
  kTransportError,
  kTimeout,
  kRemoteError,
  kPackageMismatch,
  kServiceUnavailable,
  kLoadFailed,
  kProtocolMismatch,
  kInvalidArgument,
  kResourceExhausted,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }
  // The message without the code prefix.
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

// Raised on the client when the server answered a call with an ERROR frame.
class RemoteError : public Error {
 public:
  RemoteError(std::string remote_code, std::string detail);

  const std::string& remote_code() const { return remote_code_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string remote_code_;
  std::string detail_;
};

}  // namespace treble

#endif  // TREBLE_BASE_ERROR_H_
