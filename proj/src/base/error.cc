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

#include "treble/base/error.h"

namespace treble {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kDuplicateDecl: return "DuplicateDecl";
    case ErrorCode::kUnresolvedName: return "UnresolvedName";
    case ErrorCode::kCyclicInheritance: return "CyclicInheritance";
    case ErrorCode::kImportMissing: return "ImportMissing";
    case ErrorCode::kInvalidType: return "InvalidType";
    case ErrorCode::kSpecSyntaxError: return "SpecSyntaxError";
    case ErrorCode::kUnknownTypeTag: return "UnknownTypeTag";
    case ErrorCode::kValueTooLarge: return "ValueTooLarge";
    case ErrorCode::kTruncatedMessage: return "TruncatedMessage";
    case ErrorCode::kUnknownTag: return "UnknownTag";
    case ErrorCode::kTrailingBytes: return "TrailingBytes";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kRegistryUnavailable: return "RegistryUnavailable";
    case ErrorCode::kAddressInUse: return "AddressInUse";
    case ErrorCode::kIncompleteImplementation: return "IncompleteImplementation";
    case ErrorCode::kUnknownMethod: return "UnknownMethod";
    case ErrorCode::kTypeMismatch: return "TypeMismatch";
    case ErrorCode::kTransportError: return "TransportError";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kRemoteError: return "RemoteError";
    case ErrorCode::kPackageMismatch: return "PackageMismatch";
    case ErrorCode::kServiceUnavailable: return "ServiceUnavailable";
    case ErrorCode::kLoadFailed: return "LoadFailed";
    case ErrorCode::kProtocolMismatch: return "ProtocolMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kResourceExhausted: return "ResourceExhausted";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message), code_(code), message_(message) {}

RemoteError::RemoteError(std::string remote_code, std::string detail)
    : Error(ErrorCode::kRemoteError, remote_code + " (" + detail + ")"),
      remote_code_(std::move(remote_code)),
      detail_(std::move(detail)) {}

}  // namespace treble
