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

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bin2vec/types.hpp"

namespace bin2vec {

// Canonical register families. 32-bit and 64-bit names of the same
// architectural register collapse into one family (rax/eax/ax/al/ah -> Acc),
// so register evidence from both bitnesses occupies the same dimensions.
// The enum order is the vector layout; do not reorder.
enum class RegisterFamily {
  Acc,
  Base,
  Count,
  Data,
  Si,
  Di,
  Sp,
  Bp,
  Ip,
  Flags,
  Ext8,
  Ext9,
  Ext10,
  Ext11,
  Ext12,
  Ext13,
  Ext14,
  Ext15,
  Other,  // recognized but untracked registers (SIMD, FPU, segments, ...)
};

inline constexpr std::size_t kRegisterFamilyCount = 19;

std::string_view register_family_name(RegisterFamily family);

// Maps a lowercase register token onto its family. 64-bit-only names (rax,
// r8..r15 and their d/w/b forms, rip, rflags, sil/dil/spl/bpl) are rejected
// under PE32 with UnknownRegister. Tokens outside the general-purpose table
// (xmm0, st0, segment registers, ...) map to Other rather than failing, so
// real traces with SIMD/FPU activity still ingest.
//
// Throws: EmptyToken, UnknownRegister.
RegisterFamily canonicalize_register(std::string_view token, Bitness bitness);

// Per-family activity accumulated over a whole trace.
struct RegisterSummary {
  RegisterFamily family = RegisterFamily::Other;
  std::uint64_t update_count = 0;  // always equal to write_count
  std::uint64_t read_count = 0;
  std::uint64_t write_count = 0;
  double read_write_ratio = 0.0;  // reads / (reads + writes), 0 when idle
  // Count of read/write touches per event category; sums to
  // read_count + write_count.
  std::array<std::uint64_t, kTraceCategoryCount> context_histogram{};

  bool operator==(const RegisterSummary&) const = default;
};

// One summary per family with nonzero activity, in family order.
// Propagates UnknownRegister for tokens invalid under the given bitness.
std::vector<RegisterSummary> summarize_registers(
    std::span<const TraceEvent> trace, Bitness bitness);

// Shannon entropy (base 2) of the histogram's normalized distribution;
// 0 for an empty histogram.
double context_entropy(
    const std::array<std::uint64_t, kTraceCategoryCount>& histogram);

}  // namespace bin2vec
