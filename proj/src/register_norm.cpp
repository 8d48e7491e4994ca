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

#include "bin2vec/register_norm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <unordered_map>

#include "bin2vec/errors.hpp"

namespace bin2vec {

namespace {

struct TableEntry {
  RegisterFamily family;
  bool x64_only;
};

// General-purpose name table. sil/dil/spl/bpl need a REX prefix and the
// r* names only exist on x86-64, so those are all rejected under PE32.
// ah/bh/ch/dh fold into their parent families.
const std::unordered_map<std::string_view, TableEntry>& gp_table() {
  static const std::unordered_map<std::string_view, TableEntry> table = [] {
    std::unordered_map<std::string_view, TableEntry> t;
    auto both = [&](std::initializer_list<std::string_view> names,
                    RegisterFamily family) {
      for (auto n : names) t.emplace(n, TableEntry{family, false});
    };
    auto x64 = [&](std::initializer_list<std::string_view> names,
                   RegisterFamily family) {
      for (auto n : names) t.emplace(n, TableEntry{family, true});
    };
    both({"eax", "ax", "al", "ah"}, RegisterFamily::Acc);
    x64({"rax"}, RegisterFamily::Acc);
    both({"ebx", "bx", "bl", "bh"}, RegisterFamily::Base);
    x64({"rbx"}, RegisterFamily::Base);
    both({"ecx", "cx", "cl", "ch"}, RegisterFamily::Count);
    x64({"rcx"}, RegisterFamily::Count);
    both({"edx", "dx", "dl", "dh"}, RegisterFamily::Data);
    x64({"rdx"}, RegisterFamily::Data);
    both({"esi", "si"}, RegisterFamily::Si);
    x64({"rsi", "sil"}, RegisterFamily::Si);
    both({"edi", "di"}, RegisterFamily::Di);
    x64({"rdi", "dil"}, RegisterFamily::Di);
    both({"esp", "sp"}, RegisterFamily::Sp);
    x64({"rsp", "spl"}, RegisterFamily::Sp);
    both({"ebp", "bp"}, RegisterFamily::Bp);
    x64({"rbp", "bpl"}, RegisterFamily::Bp);
    both({"eip", "ip"}, RegisterFamily::Ip);
    x64({"rip"}, RegisterFamily::Ip);
    both({"eflags", "flags"}, RegisterFamily::Flags);
    x64({"rflags"}, RegisterFamily::Flags);
    static const char* ext_names[8][4] = {
        {"r8", "r8d", "r8w", "r8b"},    {"r9", "r9d", "r9w", "r9b"},
        {"r10", "r10d", "r10w", "r10b"}, {"r11", "r11d", "r11w", "r11b"},
        {"r12", "r12d", "r12w", "r12b"}, {"r13", "r13d", "r13w", "r13b"},
        {"r14", "r14d", "r14w", "r14b"}, {"r15", "r15d", "r15w", "r15b"}};
    for (int n = 0; n < 8; ++n) {
      auto family = static_cast<RegisterFamily>(
          static_cast<int>(RegisterFamily::Ext8) + n);
      for (const char* name : ext_names[n]) t.emplace(name, TableEntry{family, true});
    }
    return t;
  }();
  return table;
}

std::string to_lower(std::string_view token) {
  std::string out(token);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

}  // namespace

std::string_view register_family_name(RegisterFamily family) {
  switch (family) {
    case RegisterFamily::Acc: return "acc";
    case RegisterFamily::Base: return "base";
    case RegisterFamily::Count: return "count";
    case RegisterFamily::Data: return "data";
    case RegisterFamily::Si: return "si";
    case RegisterFamily::Di: return "di";
    case RegisterFamily::Sp: return "sp";
    case RegisterFamily::Bp: return "bp";
    case RegisterFamily::Ip: return "ip";
    case RegisterFamily::Flags: return "flags";
    case RegisterFamily::Ext8: return "ext8";
    case RegisterFamily::Ext9: return "ext9";
    case RegisterFamily::Ext10: return "ext10";
    case RegisterFamily::Ext11: return "ext11";
    case RegisterFamily::Ext12: return "ext12";
    case RegisterFamily::Ext13: return "ext13";
    case RegisterFamily::Ext14: return "ext14";
    case RegisterFamily::Ext15: return "ext15";
    case RegisterFamily::Other: return "other";
  }
  return "other";
}

RegisterFamily canonicalize_register(std::string_view token, Bitness bitness) {
  if (token.empty()) {
    throw Error(ErrorKind::EmptyToken, "empty register token");
  }
  const std::string lowered = to_lower(token);
  const auto& table = gp_table();
  auto it = table.find(lowered);
  if (it == table.end()) {
    return RegisterFamily::Other;
  }
  if (it->second.x64_only && bitness == Bitness::PE32) {
    throw Error(ErrorKind::UnknownRegister,
                "64-bit register '" + lowered + "' in a PE32 trace");
  }
  return it->second.family;
}

std::vector<RegisterSummary> summarize_registers(
    std::span<const TraceEvent> trace, Bitness bitness) {
  struct Accum {
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    std::array<std::uint64_t, kTraceCategoryCount> histogram{};
  };
  std::array<Accum, kRegisterFamilyCount> accum{};

  for (const TraceEvent& event : trace) {
    const auto cat = static_cast<std::size_t>(event.category);
    for (const std::string& token : event.regs_read) {
      auto fam = static_cast<std::size_t>(canonicalize_register(token, bitness));
      accum[fam].reads += 1;
      accum[fam].histogram[cat] += 1;
    }
    for (const std::string& token : event.regs_written) {
      auto fam = static_cast<std::size_t>(canonicalize_register(token, bitness));
      accum[fam].writes += 1;
      accum[fam].histogram[cat] += 1;
    }
  }

  std::vector<RegisterSummary> out;
  for (std::size_t fam = 0; fam < kRegisterFamilyCount; ++fam) {
    const Accum& a = accum[fam];
    if (a.reads + a.writes == 0) continue;
    RegisterSummary summary;
    summary.family = static_cast<RegisterFamily>(fam);
    summary.read_count = a.reads;
    summary.write_count = a.writes;
    summary.update_count = a.writes;
    summary.read_write_ratio =
        static_cast<double>(a.reads) / static_cast<double>(a.reads + a.writes);
    summary.context_histogram = a.histogram;
    out.push_back(std::move(summary));
  }
  return out;
}

double context_entropy(
    const std::array<std::uint64_t, kTraceCategoryCount>& histogram) {
  std::uint64_t total = 0;
  for (std::uint64_t c : histogram) total += c;
  if (total == 0) return 0.0;
  double entropy = 0.0;
  for (std::uint64_t c : histogram) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    entropy -= p * std::log2(p);
  }
  return entropy;
}

}  // namespace bin2vec
