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

#include <doctest.h>

#include <json.hpp>

#include "bin2vec/errors.hpp"
#include "bin2vec/ingest.hpp"
#include "test_support.hpp"

using namespace bin2vec;
using namespace bin2vec::testing;
using nlohmann::json;

namespace {

json base_static_doc() {
  return json::parse(R"({
    "format": "bin2vec-static-v1",
    "artifact_id": "alpha",
    "functions": [
      {"name": "main", "address": "0x401000", "parameter_count": 2,
       "local_count": 4, "calling_convention": "cdecl", "is_varargs": false,
       "call_in_degree": 1, "call_out_degree": 3, "size_bytes": 16},
      {"name": "helper", "address": "0x401200", "parameter_count": 0,
       "local_count": 1, "calling_convention": "stdcall", "is_varargs": true,
       "call_in_degree": 2, "call_out_degree": 0, "size_bytes": 40}
    ],
    "imports": [
      {"name": "CreateFileW", "library": "kernel32.dll", "address": "0x402000",
       "namespace": "win32", "is_primary": true, "source": "iat"},
      {"name": "ReadFile", "library": "kernel32.dll", "address": "0x402004",
       "namespace": "win32", "is_primary": false, "source": "iat"},
      {"name": "send", "library": "ws2_32.dll", "address": "0x402008",
       "namespace": "winsock", "is_primary": true, "source": "iat"}
    ],
    "exports": []
  })");
}

std::string trace_line(int seq, const std::string& mnemonic,
                       const std::string& category,
                       const std::string& reg_read,
                       const std::string& reg_written) {
  json line;
  line["seq"] = seq;
  line["ip"] = "0x401000";
  line["mnemonic"] = mnemonic;
  line["operands"] = json::array();
  line["category"] = category;
  line["regs_read"] = reg_read.empty() ? json::array() : json::array({reg_read});
  line["regs_written"] =
      reg_written.empty() ? json::array() : json::array({reg_written});
  return line.dump();
}

ErrorKind static_error_kind(const json& doc) {
  try {
    parse_static_export(doc.dump(), "s.json");
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::IoError;
}

}  // namespace

TEST_CASE("a well-formed static export parses with positional provenance") {
  const StaticExport parsed = parse_static_export(base_static_doc().dump(), "s.json");
  CHECK(parsed.artifact_id == "alpha");
  REQUIRE(parsed.functions.size() == 2);
  REQUIRE(parsed.imports.size() == 3);
  CHECK(parsed.exports.empty());

  CHECK(parsed.functions[0].address == 0x401000);
  CHECK(parsed.functions[0].size_bytes == 16);
  CHECK(parsed.functions[1].is_varargs);
  for (std::size_t i = 0; i < parsed.functions.size(); ++i) {
    CHECK(parsed.functions[i].provenance.record_index == i);
    CHECK(parsed.functions[i].provenance.source_file == "s.json");
    CHECK(parsed.functions[i].provenance.source_tool == SourceTool::StaticAnalyzer);
  }
  for (std::size_t i = 0; i < parsed.imports.size(); ++i) {
    CHECK(parsed.imports[i].provenance.record_index == i);
  }
  CHECK(parsed.imports[2].library == "ws2_32.dll");
}

TEST_CASE("missing required fields violate the schema at the exact path") {
  json doc = base_static_doc();
  doc["functions"][0].erase("size_bytes");
  try {
    parse_static_export(doc.dump(), "s.json");
    FAIL("expected SchemaViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SchemaViolation);
    CHECK(e.path() == "functions[0].size_bytes");
  }
}

TEST_CASE("invariant violations are schema violations") {
  json doc = base_static_doc();
  doc["functions"][0]["size_bytes"] = 0;
  CHECK(static_error_kind(doc) == ErrorKind::SchemaViolation);

  doc = base_static_doc();
  doc["functions"][1]["calling_convention"] = "";
  CHECK(static_error_kind(doc) == ErrorKind::SchemaViolation);

  doc = base_static_doc();
  doc["imports"][0]["library"] = "";
  CHECK(static_error_kind(doc) == ErrorKind::SchemaViolation);

  doc = base_static_doc();
  doc["functions"][0]["parameter_count"] = -3;
  CHECK(static_error_kind(doc) == ErrorKind::SchemaViolation);

  doc = base_static_doc();
  doc["functions"][0]["address"] = "401000";
  CHECK(static_error_kind(doc) == ErrorKind::SchemaViolation);

  doc = base_static_doc();
  doc["format"] = "something-else";
  CHECK(static_error_kind(doc) == ErrorKind::SchemaViolation);
}

TEST_CASE("duplicate function addresses are rejected") {
  json doc = base_static_doc();
  doc["functions"][1]["address"] = "0x401000";
  CHECK(static_error_kind(doc) == ErrorKind::DuplicateFunctionAddress);
}

TEST_CASE("duplicate imports are evidence and are kept") {
  json doc = base_static_doc();
  doc["imports"].push_back(doc["imports"][0]);
  const StaticExport parsed = parse_static_export(doc.dump(), "s.json");
  CHECK(parsed.imports.size() == 4);
  CHECK(parsed.imports[3].name == parsed.imports[0].name);
  CHECK(parsed.imports[3].provenance.record_index == 3);
}

TEST_CASE("well-formed trace lines parse in order") {
  const std::string text =
      trace_line(0, "mov", "data_move", "", "eax") + "\n" +
      trace_line(1, "add", "arithmetic", "eax", "eax") + "\n" +
      trace_line(2, "jmp", "control_flow", "", "") + "\n";
  const auto events = parse_trace_log(text, Bitness::PE32, "t.jsonl");
  REQUIRE(events.size() == 3);
  CHECK(events[0].mnemonic == "mov");
  CHECK(events[1].regs_read == std::vector<std::string>{"eax"});
  CHECK(events[2].category == TraceCategory::ControlFlow);
  CHECK(events[2].provenance.record_index == 2);
}

TEST_CASE("mnemonics and register tokens are lowercased at parse time") {
  const std::string text = trace_line(0, "MOV", "data_move", "EAX", "EBX");
  const auto events = parse_trace_log(text, Bitness::PE32, "t.jsonl");
  REQUIRE(events.size() == 1);
  CHECK(events[0].mnemonic == "mov");
  CHECK(events[0].regs_read == std::vector<std::string>{"eax"});
  CHECK(events[0].regs_written == std::vector<std::string>{"ebx"});
}

TEST_CASE("a 64-bit register inside a PE32 trace fails") {
  const std::string text = trace_line(0, "mov", "data_move", "", "rax");
  try {
    parse_trace_log(text, Bitness::PE32, "t.jsonl");
    FAIL("expected UnknownRegister");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownRegister);
    CHECK(e.path() == "trace[0].regs_written[0]");
  }
  // The same line is fine under PE32+.
  CHECK(parse_trace_log(text, Bitness::PE32Plus, "t.jsonl").size() == 1);
}

TEST_CASE("sequences must strictly increase") {
  const std::string text =
      trace_line(0, "mov", "data_move", "", "") + "\n" +
      trace_line(2, "add", "arithmetic", "", "") + "\n" +
      trace_line(1, "jmp", "control_flow", "", "") + "\n";
  try {
    parse_trace_log(text, Bitness::PE32, "t.jsonl");
    FAIL("expected NonMonotonicSequence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonMonotonicSequence);
  }
}

TEST_CASE("unknown categories violate the schema rather than being guessed") {
  const std::string text = trace_line(0, "mov", "banana", "", "");
  CHECK_THROWS_AS(parse_trace_log(text, Bitness::PE32, "t.jsonl"), Error);
}

TEST_CASE("merge keeps evidence and provenance") {
  const StaticExport parsed = parse_static_export(base_static_doc().dump(), "s.json");
  PEIdentity identity{"alpha", Bitness::PE32, 0x14C, 0x10B};

  SUBCASE("static-only artifacts are valid") {
    const ArtifactBundle bundle = merge_artifact(identity, parsed, {});
    CHECK(bundle.trace.empty());
    CHECK(bundle.functions.size() == 2);
    CHECK(bundle.functions[1].provenance.record_index == 1);
  }

  SUBCASE("all-empty inputs are rejected") {
    StaticExport empty;
    empty.artifact_id = "alpha";
    CHECK_THROWS_AS(merge_artifact(identity, empty, {}), Error);
    try {
      merge_artifact(identity, empty, {});
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::EmptyBundle);
    }
  }

  SUBCASE("mismatched artifact ids are rejected") {
    PEIdentity other = identity;
    other.artifact_id = "beta";
    try {
      merge_artifact(other, parsed, {});
      FAIL("expected IdentityMismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::IdentityMismatch);
    }
  }
}

TEST_CASE("bundles round-trip through their on-disk form") {
  const StaticExport parsed = parse_static_export(base_static_doc().dump(), "s.json");
  const std::string trace_text =
      trace_line(0, "mov", "data_move", "", "eax") + "\n" +
      trace_line(5, "cmp", "arithmetic", "eax", "") + "\n";
  const auto events = parse_trace_log(trace_text, Bitness::PE32, "t.jsonl");
  const PEIdentity identity{"alpha", Bitness::PE32, 0x14C, 0x10B};
  const ArtifactBundle bundle = merge_artifact(identity, parsed, events);

  const std::string serialized = bundle_to_json(bundle);
  const ArtifactBundle reparsed = bundle_from_json(serialized);
  CHECK(reparsed == bundle);

  // Serialization is canonical: a second round trip is byte-identical.
  CHECK(bundle_to_json(reparsed) == serialized);
}
