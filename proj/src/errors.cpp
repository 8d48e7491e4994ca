// Copyright 2026 the bin2vec authors. All Rights Reserved.
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

#include "bin2vec/errors.hpp"

#include <json.hpp>

namespace bin2vec {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingDosMagic: return "MissingDosMagic";
    case ErrorKind::TruncatedHeader: return "TruncatedHeader";
    case ErrorKind::BadPeSignature: return "BadPeSignature";
    case ErrorKind::UnknownOptionalMagic: return "UnknownOptionalMagic";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::DuplicateFunctionAddress: return "DuplicateFunctionAddress";
    case ErrorKind::NonMonotonicSequence: return "NonMonotonicSequence";
    case ErrorKind::EmptyBundle: return "EmptyBundle";
    case ErrorKind::IdentityMismatch: return "IdentityMismatch";
    case ErrorKind::UnknownRegister: return "UnknownRegister";
    case ErrorKind::EmptyToken: return "EmptyToken";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::InsufficientRows: return "InsufficientRows";
    case ErrorKind::KTooLarge: return "KTooLarge";
    case ErrorKind::LayoutMismatch: return "LayoutMismatch";
    case ErrorKind::EncoderMismatch: return "EncoderMismatch";
    case ErrorKind::NoCommonViews: return "NoCommonViews";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string build_what(ErrorKind kind, const std::string& reason,
                       const std::string& path) {
  std::string out = error_kind_name(kind);
  out += ": ";
  out += reason;
  if (!path.empty()) {
    out += " (at ";
    out += path;
    out += ")";
  }
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, std::string reason, std::string path)
    : std::runtime_error(build_what(kind, reason, path)),
      kind_(kind),
      reason_(std::move(reason)),
      path_(std::move(path)) {}

std::string Error::to_json() const {
  nlohmann::ordered_json inner;
  inner["type"] = error_kind_name(kind_);
  inner["reason"] = reason_;
  if (!path_.empty()) {
    inner["path"] = path_;
  }
  nlohmann::ordered_json doc;
  doc["error"] = inner;
  return doc.dump();
}

}  // namespace bin2vec
