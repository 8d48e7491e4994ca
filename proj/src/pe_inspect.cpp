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

#include "bin2vec/pe_inspect.hpp"

#include "bin2vec/errors.hpp"

namespace bin2vec {

namespace {

constexpr std::size_t kDosHeaderSize = 0x40;
constexpr std::size_t kLfanewOffset = 0x3C;
constexpr std::size_t kCoffHeaderSize = 20;
constexpr std::uint16_t kMagicPe32 = 0x10B;
constexpr std::uint16_t kMagicPe32Plus = 0x20B;

std::uint16_t read_u16(std::span<const std::uint8_t> bytes, std::size_t offset) {
  return static_cast<std::uint16_t>(bytes[offset]) |
         static_cast<std::uint16_t>(bytes[offset + 1]) << 8;
}

std::uint32_t read_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  return static_cast<std::uint32_t>(bytes[offset]) |
         static_cast<std::uint32_t>(bytes[offset + 1]) << 8 |
         static_cast<std::uint32_t>(bytes[offset + 2]) << 16 |
         static_cast<std::uint32_t>(bytes[offset + 3]) << 24;
}

}  // namespace

std::string_view bitness_name(Bitness bitness) {
  return bitness == Bitness::PE32 ? "PE32" : "PE32+";
}

Bitness bitness_from_name(std::string_view name) {
  if (name == "PE32" || name == "pe32") return Bitness::PE32;
  if (name == "PE32+" || name == "pe32+" || name == "pe32plus") {
    return Bitness::PE32Plus;
  }
  throw Error(ErrorKind::ConfigError,
              "unknown bitness '" + std::string(name) +
                  "', expected pe32 or pe32+");
}

PEIdentity detect_bitness(std::span<const std::uint8_t> raw_bytes,
                          std::string artifact_id) {
  if (raw_bytes.size() < kDosHeaderSize) {
    throw Error(ErrorKind::TruncatedHeader,
                "file smaller than a DOS header (" +
                    std::to_string(raw_bytes.size()) + " bytes)");
  }
  if (raw_bytes[0] != 'M' || raw_bytes[1] != 'Z') {
    throw Error(ErrorKind::MissingDosMagic, "missing MZ magic, not a PE file");
  }

  const std::uint32_t lfanew = read_u32(raw_bytes, kLfanewOffset);
  // Signature (4) + COFF header (20) + optional-header magic (2).
  const std::uint64_t needed = static_cast<std::uint64_t>(lfanew) + 4 +
                               kCoffHeaderSize + 2;
  if (needed > raw_bytes.size()) {
    throw Error(ErrorKind::TruncatedHeader,
                "e_lfanew points past end of file (e_lfanew=" +
                    std::to_string(lfanew) + ")");
  }
  if (raw_bytes[lfanew] != 'P' || raw_bytes[lfanew + 1] != 'E' ||
      raw_bytes[lfanew + 2] != 0 || raw_bytes[lfanew + 3] != 0) {
    throw Error(ErrorKind::BadPeSignature, "PE\\0\\0 signature not found");
  }

  PEIdentity identity;
  identity.artifact_id = std::move(artifact_id);
  identity.machine_code = read_u16(raw_bytes, lfanew + 4);
  identity.optional_header_magic =
      read_u16(raw_bytes, lfanew + 4 + kCoffHeaderSize);

  switch (identity.optional_header_magic) {
    case kMagicPe32:
      identity.bitness = Bitness::PE32;
      break;
    case kMagicPe32Plus:
      identity.bitness = Bitness::PE32Plus;
      break;
    default:
      throw Error(ErrorKind::UnknownOptionalMagic,
                  "optional-header magic " +
                      std::to_string(identity.optional_header_magic) +
                      " is neither PE32 (0x10B) nor PE32+ (0x20B)");
  }
  return identity;
}

}  // namespace bin2vec
