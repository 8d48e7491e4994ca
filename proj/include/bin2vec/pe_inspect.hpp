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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace bin2vec {

enum class Bitness { PE32, PE32Plus };

std::string_view bitness_name(Bitness bitness);    // "PE32" / "PE32+"
Bitness bitness_from_name(std::string_view name);  // throws ConfigError

struct PEIdentity {
  std::string artifact_id;
  Bitness bitness = Bitness::PE32;
  std::uint16_t machine_code = 0;
  std::uint16_t optional_header_magic = 0;

  bool operator==(const PEIdentity&) const = default;
};

// Classifies a PE image as 32-bit (optional-header magic 0x10B) or 64-bit
// (0x20B) by walking DOS header -> e_lfanew -> "PE\0\0" -> COFF header ->
// optional-header magic. Only the headers are read; sections and data
// directories are never touched. The machine code is recorded for the
// record but the optional-header magic alone decides the classification.
//
// Throws: MissingDosMagic, TruncatedHeader, BadPeSignature,
// UnknownOptionalMagic.
PEIdentity detect_bitness(std::span<const std::uint8_t> raw_bytes,
                          std::string artifact_id);

}  // namespace bin2vec
