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
#include <string>
#include <string_view>
#include <vector>

#include "bin2vec/pe_inspect.hpp"

namespace bin2vec {

enum class SourceTool { StaticAnalyzer, DynamicTracer, Manual };

std::string_view source_tool_name(SourceTool tool);
SourceTool source_tool_from_name(std::string_view name);  // throws SchemaViolation

// Links one evidence element back to the exact file and array entry / line
// it came from. Every record in an ArtifactBundle carries exactly one tag.
struct ProvenanceTag {
  SourceTool source_tool = SourceTool::Manual;
  std::string source_file;
  std::size_t record_index = 0;

  bool operator==(const ProvenanceTag&) const = default;
};

// Fixed category order; the trace activity vector depends on it.
enum class TraceCategory {
  MemoryRead,
  MemoryWrite,
  ControlFlow,
  Arithmetic,
  DataMove,
  Other,
};

inline constexpr std::size_t kTraceCategoryCount = 6;

std::string_view trace_category_name(TraceCategory category);
// Returns false when the token is not a known category.
bool trace_category_from_name(std::string_view name, TraceCategory& out);

struct FunctionRecord {
  std::string name;
  std::uint64_t address = 0;
  std::uint64_t parameter_count = 0;
  std::uint64_t local_count = 0;
  std::string calling_convention;  // non-empty
  bool is_varargs = false;
  std::uint64_t call_in_degree = 0;
  std::uint64_t call_out_degree = 0;
  std::uint64_t size_bytes = 1;  // >= 1
  ProvenanceTag provenance;

  bool operator==(const FunctionRecord&) const = default;
};

struct SymbolRecord {
  enum class Kind { Import, Export };

  Kind kind = Kind::Import;
  std::string name;
  std::string library;  // non-empty when kind == Import
  std::uint64_t address = 0;
  std::string namespace_;
  bool is_primary = false;
  std::string source;  // opaque categorical token from the producer
  ProvenanceTag provenance;

  bool operator==(const SymbolRecord&) const = default;
};

struct TraceEvent {
  std::uint64_t sequence = 0;  // strictly increasing within one trace file
  std::uint64_t ip = 0;
  std::string mnemonic;  // lowercase, non-empty
  std::vector<std::string> operand_tokens;
  TraceCategory category = TraceCategory::Other;
  std::vector<std::string> regs_read;     // lowercase register tokens
  std::vector<std::string> regs_written;  // lowercase register tokens
  ProvenanceTag provenance;

  bool operator==(const TraceEvent&) const = default;
};

// Merged, provenance-tagged static + dynamic record for one binary.
// Evidence lists may independently be empty, but never all at once.
struct ArtifactBundle {
  PEIdentity identity;
  std::vector<FunctionRecord> functions;
  std::vector<SymbolRecord> imports;
  std::vector<SymbolRecord> exports;
  std::vector<TraceEvent> trace;

  bool operator==(const ArtifactBundle&) const = default;
};

// Canonical lowercase hex rendering ("0x401000") used wherever an address
// becomes a token or is written back to disk.
std::string format_address(std::uint64_t address);

}  // namespace bin2vec
