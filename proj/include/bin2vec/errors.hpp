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

#pragma once

#include <stdexcept>
#include <string>

namespace bin2vec {

// Every failure the library can report. The CLI maps these to exit code 1
// (input/validation) and prints a one-line JSON object on stderr; anything
// not represented here is an internal error (exit code 2).
enum class ErrorKind {
  // pe_inspect
  MissingDosMagic,
  TruncatedHeader,
  BadPeSignature,
  UnknownOptionalMagic,
  // ingest
  SchemaViolation,
  DuplicateFunctionAddress,
  NonMonotonicSequence,
  EmptyBundle,
  IdentityMismatch,
  // register_norm
  UnknownRegister,
  // encoder
  EmptyToken,
  EmptyInput,
  // numerics
  DimensionMismatch,
  ZeroVector,
  InsufficientRows,
  KTooLarge,
  // comparison
  LayoutMismatch,
  EncoderMismatch,
  NoCommonViews,
  // cli / io
  ConfigError,
  IoError,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string reason, std::string path = "");

  ErrorKind kind() const { return kind_; }
  const std::string& reason() const { return reason_; }
  const std::string& path() const { return path_; }

  // One-line machine-readable form, e.g.
  // {"error":{"type":"SchemaViolation","reason":"...","path":"functions[2].size_bytes"}}
  std::string to_json() const;

 private:
  ErrorKind kind_;
  std::string reason_;
  std::string path_;
};

}  // namespace bin2vec
