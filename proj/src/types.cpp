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

#include "bin2vec/types.hpp"

#include <cstdio>

#include "bin2vec/errors.hpp"

namespace bin2vec {

std::string_view source_tool_name(SourceTool tool) {
  switch (tool) {
    case SourceTool::StaticAnalyzer: return "static_analyzer";
    case SourceTool::DynamicTracer: return "dynamic_tracer";
    case SourceTool::Manual: return "manual";
  }
  return "manual";
}

SourceTool source_tool_from_name(std::string_view name) {
  if (name == "static_analyzer") return SourceTool::StaticAnalyzer;
  if (name == "dynamic_tracer") return SourceTool::DynamicTracer;
  if (name == "manual") return SourceTool::Manual;
  throw Error(ErrorKind::SchemaViolation,
              "unknown source tool '" + std::string(name) + "'");
}

std::string_view trace_category_name(TraceCategory category) {
  switch (category) {
    case TraceCategory::MemoryRead: return "memory_read";
    case TraceCategory::MemoryWrite: return "memory_write";
    case TraceCategory::ControlFlow: return "control_flow";
    case TraceCategory::Arithmetic: return "arithmetic";
    case TraceCategory::DataMove: return "data_move";
    case TraceCategory::Other: return "other";
  }
  return "other";
}

bool trace_category_from_name(std::string_view name, TraceCategory& out) {
  if (name == "memory_read") out = TraceCategory::MemoryRead;
  else if (name == "memory_write") out = TraceCategory::MemoryWrite;
  else if (name == "control_flow") out = TraceCategory::ControlFlow;
  else if (name == "arithmetic") out = TraceCategory::Arithmetic;
  else if (name == "data_move") out = TraceCategory::DataMove;
  else if (name == "other") out = TraceCategory::Other;
  else return false;
  return true;
}

std::string format_address(std::uint64_t address) {
  char buf[2 + 16 + 1];
  std::snprintf(buf, sizeof(buf), "0x%llx",
                static_cast<unsigned long long>(address));
  return buf;
}

}  // namespace bin2vec
