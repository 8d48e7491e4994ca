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

#include <string>
#include <string_view>
#include <vector>

#include "bin2vec/types.hpp"

namespace bin2vec {

// Parsed `bin2vec-static-v1` document.
struct StaticExport {
  std::string artifact_id;
  std::vector<FunctionRecord> functions;
  std::vector<SymbolRecord> imports;
  std::vector<SymbolRecord> exports;
};

// Parses and validates a `bin2vec-static-v1` JSON document. Record indices
// in provenance equal each element's position in its source array, so a
// (source_file, record_index) pair locates the originating entry exactly.
//
// Throws SchemaViolation (with the offending path) and
// DuplicateFunctionAddress.
StaticExport parse_static_export(std::string_view file_text,
                                 const std::string& source_file);

// Parses and validates `bin2vec-trace-v1` JSON lines. Mnemonics and
// register tokens are lowercased here; categories are validated against the
// fixed enum, never inferred from mnemonics. Register tokens are checked
// against the bitness so a 64-bit name inside a PE32 trace fails loudly.
//
// Throws SchemaViolation, NonMonotonicSequence, UnknownRegister.
std::vector<TraceEvent> parse_trace_log(std::string_view file_text,
                                        Bitness bitness,
                                        const std::string& source_file);

// Merges static and dynamic evidence into one provenance-tagged bundle.
// Throws IdentityMismatch when the static document names a different
// artifact, EmptyBundle when there is no evidence at all.
ArtifactBundle merge_artifact(const PEIdentity& identity,
                              const StaticExport& static_export,
                              std::vector<TraceEvent> trace);

// `bin2vec-bundle-v1` round-trip. Serialization is canonical, so
// parse(serialize(bundle)) == bundle.
std::string bundle_to_json(const ArtifactBundle& bundle);
ArtifactBundle bundle_from_json(std::string_view file_text);

}  // namespace bin2vec
