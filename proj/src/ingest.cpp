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

#include "bin2vec/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "bin2vec/errors.hpp"
#include "bin2vec/formats.hpp"
#include "bin2vec/register_norm.hpp"

namespace bin2vec {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void violation(const std::string& path, const std::string& reason) {
  throw Error(ErrorKind::SchemaViolation, reason, path);
}

const json& require_member(const json& object, const char* key,
                           const std::string& path) {
  if (!object.is_object()) violation(path, "expected a JSON object");
  auto it = object.find(key);
  if (it == object.end()) {
    violation(path + "." + key, "missing required field");
  }
  return *it;
}

std::string require_string(const json& object, const char* key,
                           const std::string& path) {
  const json& value = require_member(object, key, path);
  if (!value.is_string()) violation(path + "." + key, "expected a string");
  return value.get<std::string>();
}

std::uint64_t require_uint(const json& object, const char* key,
                           const std::string& path) {
  const json& value = require_member(object, key, path);
  if (!value.is_number_unsigned()) {
    violation(path + "." + key, "expected a non-negative integer");
  }
  return value.get<std::uint64_t>();
}

bool require_bool(const json& object, const char* key, const std::string& path) {
  const json& value = require_member(object, key, path);
  if (!value.is_boolean()) violation(path + "." + key, "expected a boolean");
  return value.get<bool>();
}

const json& require_array(const json& object, const char* key,
                          const std::string& path) {
  const json& value = require_member(object, key, path);
  if (!value.is_array()) violation(path + "." + key, "expected an array");
  return value;
}

std::uint64_t parse_hex_address(const std::string& text, const std::string& path) {
  if (text.size() < 3 || text.size() > 18 || text[0] != '0' ||
      (text[1] != 'x' && text[1] != 'X')) {
    violation(path, "expected a hex address of the form \"0x...\"");
  }
  std::uint64_t value = 0;
  for (std::size_t i = 2; i < text.size(); ++i) {
    const char c = text[i];
    int digit;
    if (c >= '0' && c <= '9') digit = c - '0';
    else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
    else {
      violation(path, "invalid hex digit in address");
    }
    value = (value << 4) | static_cast<std::uint64_t>(digit);
  }
  return value;
}

std::uint64_t require_hex_address(const json& object, const char* key,
                                  const std::string& path) {
  const json& value = require_member(object, key, path);
  if (!value.is_string()) {
    violation(path + "." + key, "expected a hex address string");
  }
  return parse_hex_address(value.get<std::string>(), path + "." + key);
}

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

json parse_document(std::string_view text, const std::string& path) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    violation(path, std::string("invalid JSON: ") + e.what());
  }
}

SymbolRecord parse_symbol(const json& entry, SymbolRecord::Kind kind,
                          const std::string& path, const std::string& source_file,
                          std::size_t index) {
  SymbolRecord symbol;
  symbol.kind = kind;
  symbol.name = require_string(entry, "name", path);
  symbol.library = require_string(entry, "library", path);
  if (kind == SymbolRecord::Kind::Import && symbol.library.empty()) {
    violation(path + ".library", "import library must be non-empty");
  }
  symbol.address = require_hex_address(entry, "address", path);
  symbol.namespace_ = require_string(entry, "namespace", path);
  symbol.is_primary = require_bool(entry, "is_primary", path);
  symbol.source = require_string(entry, "source", path);
  symbol.provenance = {SourceTool::StaticAnalyzer, source_file, index};
  return symbol;
}

}  // namespace

StaticExport parse_static_export(std::string_view file_text,
                                 const std::string& source_file) {
  const json doc = parse_document(file_text, "$");
  if (!doc.is_object()) violation("$", "expected a JSON object");

  const std::string format = require_string(doc, "format", "$");
  if (format != formats::kStaticV1) {
    violation("$.format", "unsupported format '" + format + "', expected " +
                              std::string(formats::kStaticV1));
  }

  StaticExport out;
  out.artifact_id = require_string(doc, "artifact_id", "$");
  if (out.artifact_id.empty()) {
    violation("$.artifact_id", "artifact_id must be non-empty");
  }

  const json& functions = require_array(doc, "functions", "$");
  std::unordered_map<std::uint64_t, std::size_t> seen_addresses;
  for (std::size_t i = 0; i < functions.size(); ++i) {
    const std::string path = "functions[" + std::to_string(i) + "]";
    const json& entry = functions[i];
    FunctionRecord fn;
    fn.name = require_string(entry, "name", path);
    fn.address = require_hex_address(entry, "address", path);
    fn.parameter_count = require_uint(entry, "parameter_count", path);
    fn.local_count = require_uint(entry, "local_count", path);
    fn.calling_convention = require_string(entry, "calling_convention", path);
    if (fn.calling_convention.empty()) {
      violation(path + ".calling_convention", "calling_convention must be non-empty");
    }
    fn.is_varargs = require_bool(entry, "is_varargs", path);
    fn.call_in_degree = require_uint(entry, "call_in_degree", path);
    fn.call_out_degree = require_uint(entry, "call_out_degree", path);
    fn.size_bytes = require_uint(entry, "size_bytes", path);
    if (fn.size_bytes < 1) {
      violation(path + ".size_bytes", "size_bytes must be >= 1");
    }
    fn.provenance = {SourceTool::StaticAnalyzer, source_file, i};

    auto [it, inserted] = seen_addresses.emplace(fn.address, i);
    if (!inserted) {
      throw Error(ErrorKind::DuplicateFunctionAddress,
                  "functions[" + std::to_string(it->second) + "] and functions[" +
                      std::to_string(i) + "] share address " +
                      format_address(fn.address),
                  path + ".address");
    }
    out.functions.push_back(std::move(fn));
  }

  const json& imports = require_array(doc, "imports", "$");
  for (std::size_t i = 0; i < imports.size(); ++i) {
    out.imports.push_back(parse_symbol(imports[i], SymbolRecord::Kind::Import,
                                       "imports[" + std::to_string(i) + "]",
                                       source_file, i));
  }
  const json& exports = require_array(doc, "exports", "$");
  for (std::size_t i = 0; i < exports.size(); ++i) {
    out.exports.push_back(parse_symbol(exports[i], SymbolRecord::Kind::Export,
                                       "exports[" + std::to_string(i) + "]",
                                       source_file, i));
  }
  return out;
}

std::vector<TraceEvent> parse_trace_log(std::string_view file_text,
                                        Bitness bitness,
                                        const std::string& source_file) {
  std::vector<TraceEvent> events;
  std::istringstream stream{std::string(file_text)};
  std::string line;
  std::size_t line_index = 0;
  bool have_previous = false;
  std::uint64_t previous_sequence = 0;

  for (; std::getline(stream, line); ++line_index) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string path = "trace[" + std::to_string(line_index) + "]";
    const json entry = parse_document(line, path);
    if (!entry.is_object()) violation(path, "expected a JSON object per line");

    TraceEvent event;
    event.sequence = require_uint(entry, "seq", path);
    event.ip = require_hex_address(entry, "ip", path);
    event.mnemonic = to_lower(require_string(entry, "mnemonic", path));
    if (event.mnemonic.empty()) {
      violation(path + ".mnemonic", "mnemonic must be non-empty");
    }

    const json& operands = require_array(entry, "operands", path);
    for (std::size_t i = 0; i < operands.size(); ++i) {
      if (!operands[i].is_string()) {
        violation(path + ".operands[" + std::to_string(i) + "]",
                  "expected a string");
      }
      event.operand_tokens.push_back(operands[i].get<std::string>());
    }

    const std::string category = require_string(entry, "category", path);
    if (!trace_category_from_name(category, event.category)) {
      violation(path + ".category", "unknown category '" + category + "'");
    }

    auto parse_regs = [&](const char* key, std::vector<std::string>& out_regs) {
      const json& regs = require_array(entry, key, path);
      for (std::size_t i = 0; i < regs.size(); ++i) {
        const std::string reg_path =
            path + "." + key + "[" + std::to_string(i) + "]";
        if (!regs[i].is_string()) violation(reg_path, "expected a string");
        std::string token = to_lower(regs[i].get<std::string>());
        if (token.empty()) violation(reg_path, "empty register token");
        try {
          canonicalize_register(token, bitness);
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::UnknownRegister) {
            throw Error(ErrorKind::UnknownRegister, e.reason(), reg_path);
          }
          throw;
        }
        out_regs.push_back(std::move(token));
      }
    };
    parse_regs("regs_read", event.regs_read);
    parse_regs("regs_written", event.regs_written);

    if (have_previous && event.sequence <= previous_sequence) {
      throw Error(ErrorKind::NonMonotonicSequence,
                  "sequence " + std::to_string(event.sequence) +
                      " does not increase past " +
                      std::to_string(previous_sequence),
                  path + ".seq");
    }
    previous_sequence = event.sequence;
    have_previous = true;

    event.provenance = {SourceTool::DynamicTracer, source_file, line_index};
    events.push_back(std::move(event));
  }
  return events;
}

ArtifactBundle merge_artifact(const PEIdentity& identity,
                              const StaticExport& static_export,
                              std::vector<TraceEvent> trace) {
  if (identity.artifact_id.empty()) {
    throw Error(ErrorKind::IdentityMismatch, "identity has an empty artifact_id");
  }
  if (identity.artifact_id != static_export.artifact_id) {
    throw Error(ErrorKind::IdentityMismatch,
                "identity names '" + identity.artifact_id +
                    "' but the static export names '" +
                    static_export.artifact_id + "'");
  }
  if (static_export.functions.empty() && static_export.imports.empty() &&
      static_export.exports.empty() && trace.empty()) {
    throw Error(ErrorKind::EmptyBundle, "all evidence lists are empty");
  }
  // Re-check register validity against this identity's bitness; the trace
  // may have been parsed with a different assumption.
  for (const TraceEvent& event : trace) {
    for (const std::string& token : event.regs_read) {
      canonicalize_register(token, identity.bitness);
    }
    for (const std::string& token : event.regs_written) {
      canonicalize_register(token, identity.bitness);
    }
  }

  ArtifactBundle bundle;
  bundle.identity = identity;
  bundle.functions = static_export.functions;
  bundle.imports = static_export.imports;
  bundle.exports = static_export.exports;
  bundle.trace = std::move(trace);
  return bundle;
}

namespace {

ordered_json provenance_to_json(const ProvenanceTag& tag) {
  ordered_json out;
  out["source_tool"] = std::string(source_tool_name(tag.source_tool));
  out["source_file"] = tag.source_file;
  out["record_index"] = tag.record_index;
  return out;
}

ProvenanceTag provenance_from_json(const json& value, const std::string& path) {
  ProvenanceTag tag;
  tag.source_tool = source_tool_from_name(require_string(value, "source_tool", path));
  tag.source_file = require_string(value, "source_file", path);
  tag.record_index = require_uint(value, "record_index", path);
  return tag;
}

ordered_json symbol_to_json(const SymbolRecord& symbol) {
  ordered_json out;
  out["name"] = symbol.name;
  out["library"] = symbol.library;
  out["address"] = format_address(symbol.address);
  out["namespace"] = symbol.namespace_;
  out["is_primary"] = symbol.is_primary;
  out["source"] = symbol.source;
  out["provenance"] = provenance_to_json(symbol.provenance);
  return out;
}

SymbolRecord symbol_from_json(const json& entry, SymbolRecord::Kind kind,
                              const std::string& path) {
  SymbolRecord symbol;
  symbol.kind = kind;
  symbol.name = require_string(entry, "name", path);
  symbol.library = require_string(entry, "library", path);
  if (kind == SymbolRecord::Kind::Import && symbol.library.empty()) {
    violation(path + ".library", "import library must be non-empty");
  }
  symbol.address = require_hex_address(entry, "address", path);
  symbol.namespace_ = require_string(entry, "namespace", path);
  symbol.is_primary = require_bool(entry, "is_primary", path);
  symbol.source = require_string(entry, "source", path);
  symbol.provenance =
      provenance_from_json(require_member(entry, "provenance", path), path + ".provenance");
  return symbol;
}

}  // namespace

std::string bundle_to_json(const ArtifactBundle& bundle) {
  ordered_json doc;
  doc["format"] = formats::kBundleV1;
  ordered_json identity;
  identity["artifact_id"] = bundle.identity.artifact_id;
  identity["bitness"] = std::string(bitness_name(bundle.identity.bitness));
  identity["machine_code"] = bundle.identity.machine_code;
  identity["optional_header_magic"] = bundle.identity.optional_header_magic;
  doc["identity"] = identity;

  ordered_json functions = ordered_json::array();
  for (const FunctionRecord& fn : bundle.functions) {
    ordered_json entry;
    entry["name"] = fn.name;
    entry["address"] = format_address(fn.address);
    entry["parameter_count"] = fn.parameter_count;
    entry["local_count"] = fn.local_count;
    entry["calling_convention"] = fn.calling_convention;
    entry["is_varargs"] = fn.is_varargs;
    entry["call_in_degree"] = fn.call_in_degree;
    entry["call_out_degree"] = fn.call_out_degree;
    entry["size_bytes"] = fn.size_bytes;
    entry["provenance"] = provenance_to_json(fn.provenance);
    functions.push_back(std::move(entry));
  }
  doc["functions"] = std::move(functions);

  ordered_json imports = ordered_json::array();
  for (const SymbolRecord& symbol : bundle.imports) {
    imports.push_back(symbol_to_json(symbol));
  }
  doc["imports"] = std::move(imports);

  ordered_json exports = ordered_json::array();
  for (const SymbolRecord& symbol : bundle.exports) {
    exports.push_back(symbol_to_json(symbol));
  }
  doc["exports"] = std::move(exports);

  ordered_json trace = ordered_json::array();
  for (const TraceEvent& event : bundle.trace) {
    ordered_json entry;
    entry["seq"] = event.sequence;
    entry["ip"] = format_address(event.ip);
    entry["mnemonic"] = event.mnemonic;
    entry["operands"] = event.operand_tokens;
    entry["category"] = std::string(trace_category_name(event.category));
    entry["regs_read"] = event.regs_read;
    entry["regs_written"] = event.regs_written;
    entry["provenance"] = provenance_to_json(event.provenance);
    trace.push_back(std::move(entry));
  }
  doc["trace"] = std::move(trace);

  return doc.dump(2) + "\n";
}

ArtifactBundle bundle_from_json(std::string_view file_text) {
  const json doc = parse_document(file_text, "$");
  if (!doc.is_object()) violation("$", "expected a JSON object");
  const std::string format = require_string(doc, "format", "$");
  if (format != formats::kBundleV1) {
    violation("$.format", "unsupported format '" + format + "', expected " +
                              std::string(formats::kBundleV1));
  }

  ArtifactBundle bundle;
  const json& identity = require_member(doc, "identity", "$");
  bundle.identity.artifact_id = require_string(identity, "artifact_id", "$.identity");
  if (bundle.identity.artifact_id.empty()) {
    violation("$.identity.artifact_id", "artifact_id must be non-empty");
  }
  const std::string bitness = require_string(identity, "bitness", "$.identity");
  if (bitness == "PE32") bundle.identity.bitness = Bitness::PE32;
  else if (bitness == "PE32+") bundle.identity.bitness = Bitness::PE32Plus;
  else violation("$.identity.bitness", "expected PE32 or PE32+");
  bundle.identity.machine_code =
      static_cast<std::uint16_t>(require_uint(identity, "machine_code", "$.identity"));
  bundle.identity.optional_header_magic = static_cast<std::uint16_t>(
      require_uint(identity, "optional_header_magic", "$.identity"));

  const json& functions = require_array(doc, "functions", "$");
  for (std::size_t i = 0; i < functions.size(); ++i) {
    const std::string path = "functions[" + std::to_string(i) + "]";
    const json& entry = functions[i];
    FunctionRecord fn;
    fn.name = require_string(entry, "name", path);
    fn.address = require_hex_address(entry, "address", path);
    fn.parameter_count = require_uint(entry, "parameter_count", path);
    fn.local_count = require_uint(entry, "local_count", path);
    fn.calling_convention = require_string(entry, "calling_convention", path);
    if (fn.calling_convention.empty()) {
      violation(path + ".calling_convention", "calling_convention must be non-empty");
    }
    fn.is_varargs = require_bool(entry, "is_varargs", path);
    fn.call_in_degree = require_uint(entry, "call_in_degree", path);
    fn.call_out_degree = require_uint(entry, "call_out_degree", path);
    fn.size_bytes = require_uint(entry, "size_bytes", path);
    if (fn.size_bytes < 1) violation(path + ".size_bytes", "size_bytes must be >= 1");
    fn.provenance =
        provenance_from_json(require_member(entry, "provenance", path), path + ".provenance");
    bundle.functions.push_back(std::move(fn));
  }

  const json& imports = require_array(doc, "imports", "$");
  for (std::size_t i = 0; i < imports.size(); ++i) {
    bundle.imports.push_back(symbol_from_json(
        imports[i], SymbolRecord::Kind::Import, "imports[" + std::to_string(i) + "]"));
  }
  const json& exports = require_array(doc, "exports", "$");
  for (std::size_t i = 0; i < exports.size(); ++i) {
    bundle.exports.push_back(symbol_from_json(
        exports[i], SymbolRecord::Kind::Export, "exports[" + std::to_string(i) + "]"));
  }

  const json& trace = require_array(doc, "trace", "$");
  bool have_previous = false;
  std::uint64_t previous_sequence = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const std::string path = "trace[" + std::to_string(i) + "]";
    const json& entry = trace[i];
    TraceEvent event;
    event.sequence = require_uint(entry, "seq", path);
    event.ip = require_hex_address(entry, "ip", path);
    event.mnemonic = require_string(entry, "mnemonic", path);
    if (event.mnemonic.empty()) violation(path + ".mnemonic", "mnemonic must be non-empty");
    const json& operands = require_array(entry, "operands", path);
    for (const auto& op : operands) {
      if (!op.is_string()) violation(path + ".operands", "expected strings");
      event.operand_tokens.push_back(op.get<std::string>());
    }
    const std::string category = require_string(entry, "category", path);
    if (!trace_category_from_name(category, event.category)) {
      violation(path + ".category", "unknown category '" + category + "'");
    }
    auto read_regs = [&](const char* key, std::vector<std::string>& out_regs) {
      const json& regs = require_array(entry, key, path);
      for (const auto& reg : regs) {
        if (!reg.is_string()) violation(path + "." + key, "expected strings");
        std::string token = reg.get<std::string>();
        canonicalize_register(token, bundle.identity.bitness);
        out_regs.push_back(std::move(token));
      }
    };
    read_regs("regs_read", event.regs_read);
    read_regs("regs_written", event.regs_written);
    if (have_previous && event.sequence <= previous_sequence) {
      throw Error(ErrorKind::NonMonotonicSequence,
                  "sequence does not strictly increase", path + ".seq");
    }
    previous_sequence = event.sequence;
    have_previous = true;
    event.provenance =
        provenance_from_json(require_member(entry, "provenance", path), path + ".provenance");
    bundle.trace.push_back(std::move(event));
  }

  if (bundle.functions.empty() && bundle.imports.empty() &&
      bundle.exports.empty() && bundle.trace.empty()) {
    throw Error(ErrorKind::EmptyBundle, "all evidence lists are empty");
  }
  return bundle;
}

}  // namespace bin2vec
