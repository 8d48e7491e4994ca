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

#include "bin2vec/view_builder.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "bin2vec/errors.hpp"
#include "bin2vec/formats.hpp"
#include "bin2vec/numerics.hpp"
#include "bin2vec/register_norm.hpp"

namespace bin2vec {

namespace {

constexpr std::string_view kFunctionFields[] = {
    "params", "locals", "in_degree", "out_degree", "size",
    "convention", "varargs", "name", "address"};
constexpr std::string_view kSymbolFields[] = {
    "name", "library", "namespace", "source", "address", "is_primary"};
constexpr std::string_view kTraceFields[] = {"bag_of_ops", "op_ngrams",
                                             "activity"};
constexpr std::string_view kRegisterFields[] = {
    "update_frequency", "read_write_ratio", "context_entropy"};

// Accumulates normalized token images divided by a fixed element count, so
// the resulting raw norm reflects both how often the field is populated and
// how much its tokens agree.
struct FieldAccumulator {
  explicit FieldAccumulator(std::size_t dimension) : sums(dimension) {}

  void add(std::span<const double> values) {
    for (std::size_t d = 0; d < sums.size(); ++d) {
      if (values[d] != 0.0) sums[d].add(values[d]);
    }
  }

  FieldEmbedding finish(std::string field_name, std::size_t element_count,
                        const std::string& encoder_id) const {
    FieldEmbedding field;
    field.field_name = std::move(field_name);
    field.vector.encoder_id = encoder_id;
    field.vector.values.resize(sums.size());
    for (std::size_t d = 0; d < sums.size(); ++d) {
      field.vector.values[d] =
          element_count == 0 ? 0.0
                             : sums[d].sum / static_cast<double>(element_count);
    }
    field.raw_norm = l2_norm(field.vector.values);
    field.vector.normalized = l2_normalize(field.vector.values);
    return field;
  }

  std::vector<KahanSum> sums;
};

FieldEmbedding token_field(std::string_view field_name,
                           const std::vector<std::string>& tokens,
                           std::size_t element_count, const Encoder& encoder) {
  FieldAccumulator accum(encoder.config().dimension);
  for (const std::string& token : tokens) {
    if (token.empty()) continue;
    accum.add(encoder.encode_token(token).values);
  }
  return accum.finish(std::string(field_name), element_count,
                      encoder.encoder_id());
}

// Constant unit direction (the hash image of the field name) scaled by the
// share of elements with the indicator set.
FieldEmbedding indicator_field(std::string_view field_name,
                               std::size_t set_count, std::size_t element_count,
                               const Encoder& encoder) {
  FieldEmbedding field;
  field.field_name = std::string(field_name);
  if (element_count == 0 || set_count == 0) {
    field.vector = EmbeddingVector::flagged_zero(encoder.config().dimension,
                                                 encoder.encoder_id());
    field.raw_norm = 0.0;
    return field;
  }
  field.vector = encoder.encode_token(field_name);
  field.raw_norm =
      static_cast<double>(set_count) / static_cast<double>(element_count);
  return field;
}

// Embeds a short fixed-layout vector into the leading coordinates of the
// encoder dimension and L2-normalizes.
FieldEmbedding layout_field(std::string_view field_name,
                            std::span<const double> values,
                            const Encoder& encoder) {
  const std::size_t dimension = encoder.config().dimension;
  if (values.size() > dimension) {
    throw Error(ErrorKind::ConfigError,
                "encoder dimension " + std::to_string(dimension) +
                    " is too small for a fixed layout of " +
                    std::to_string(values.size()));
  }
  FieldEmbedding field;
  field.field_name = std::string(field_name);
  field.vector.encoder_id = encoder.encoder_id();
  field.vector.values.assign(dimension, 0.0);
  std::copy(values.begin(), values.end(), field.vector.values.begin());
  field.raw_norm = l2_norm(field.vector.values);
  field.vector.normalized = l2_normalize(field.vector.values);
  return field;
}

// Mean of the present (non-absent) field embeddings, renormalized. Skipping
// absent fields only changes the divisor, which normalization cancels.
EmbeddingVector pool_field_embeddings(const std::vector<FieldEmbedding>& fields,
                                      const Encoder& encoder) {
  std::vector<const std::vector<double>*> present;
  for (const FieldEmbedding& field : fields) {
    if (!field.vector.absent()) present.push_back(&field.vector.values);
  }
  if (present.empty()) {
    return EmbeddingVector::flagged_zero(encoder.config().dimension,
                                         encoder.encoder_id());
  }
  std::vector<KahanSum> sums(encoder.config().dimension);
  for (const auto* values : present) {
    for (std::size_t d = 0; d < sums.size(); ++d) sums[d].add((*values)[d]);
  }
  EmbeddingVector pooled;
  pooled.encoder_id = encoder.encoder_id();
  pooled.values.resize(sums.size());
  for (std::size_t d = 0; d < sums.size(); ++d) {
    pooled.values[d] = sums[d].sum / static_cast<double>(present.size());
  }
  pooled.normalized = l2_normalize(pooled.values);
  return pooled;
}

std::string ngram_token(std::span<const std::string> mnemonics,
                        std::size_t start, std::size_t n) {
  std::string token = mnemonics[start];
  for (std::size_t i = 1; i < n; ++i) {
    token += '|';
    token += mnemonics[start + i];
  }
  return token;
}

}  // namespace

std::string_view view_name(ViewKind view) {
  switch (view) {
    case ViewKind::Functions: return "functions";
    case ViewKind::Imports: return "imports";
    case ViewKind::Exports: return "exports";
    case ViewKind::Traces: return "traces";
    case ViewKind::Registers: return "registers";
  }
  return "functions";
}

ViewKind view_from_name(std::string_view name) {
  for (ViewKind view : kViewOrder) {
    if (view_name(view) == name) return view;
  }
  throw Error(ErrorKind::SchemaViolation,
              "unknown view '" + std::string(name) + "'");
}

std::span<const std::string_view> field_names_for(ViewKind view) {
  switch (view) {
    case ViewKind::Functions: return kFunctionFields;
    case ViewKind::Imports:
    case ViewKind::Exports: return kSymbolFields;
    case ViewKind::Traces: return kTraceFields;
    case ViewKind::Registers: return kRegisterFields;
  }
  return kFunctionFields;
}

const ViewEmbedding& ArtifactViews::view(ViewKind kind) const {
  return views.at(static_cast<std::size_t>(kind));
}

ViewEmbedding& ArtifactViews::view(ViewKind kind) {
  return views.at(static_cast<std::size_t>(kind));
}

std::vector<double> function_numeric_descriptor(const FunctionRecord& fn) {
  return {static_cast<double>(fn.parameter_count),
          static_cast<double>(fn.local_count),
          static_cast<double>(fn.call_in_degree),
          static_cast<double>(fn.call_out_degree),
          std::log2(1.0 + static_cast<double>(fn.size_bytes))};
}

ViewEmbedding build_function_view(const ArtifactBundle& bundle,
                                  const Encoder& encoder) {
  const std::size_t dimension = encoder.config().dimension;
  const auto& functions = bundle.functions;

  ViewEmbedding view;
  view.view = ViewKind::Functions;
  view.element_count = functions.size();

  std::vector<std::string> params, locals, in_degree, out_degree, size_bucket,
      convention, names, addresses;
  std::size_t varargs_count = 0;
  for (const FunctionRecord& fn : functions) {
    params.push_back(std::to_string(fn.parameter_count));
    locals.push_back(std::to_string(fn.local_count));
    in_degree.push_back(std::to_string(fn.call_in_degree));
    out_degree.push_back(std::to_string(fn.call_out_degree));
    size_bucket.push_back(std::to_string(static_cast<std::uint64_t>(
        std::floor(std::log2(1.0 + static_cast<double>(fn.size_bytes))))));
    convention.push_back(fn.calling_convention);
    names.push_back(fn.name);
    addresses.push_back(format_address(fn.address));
    if (fn.is_varargs) ++varargs_count;
  }

  const std::size_t n = functions.size();
  view.fields.push_back(token_field("params", params, n, encoder));
  view.fields.push_back(token_field("locals", locals, n, encoder));
  view.fields.push_back(token_field("in_degree", in_degree, n, encoder));
  view.fields.push_back(token_field("out_degree", out_degree, n, encoder));
  view.fields.push_back(token_field("size", size_bucket, n, encoder));
  view.fields.push_back(token_field("convention", convention, n, encoder));
  view.fields.push_back(indicator_field("varargs", varargs_count, n, encoder));
  view.fields.push_back(token_field("name", names, n, encoder));
  view.fields.push_back(token_field("address", addresses, n, encoder));

  // Element descriptor: [raw numeric block | calling-convention image |
  // varargs bit]. The numeric block stays raw here; the comparison stage
  // standardizes it against the run population after pooling, then the
  // whole pooled vector is normalized.
  const std::size_t block_width = kFunctionNumericDims + dimension + 1;
  if (n == 0) {
    view.pooled = EmbeddingVector::flagged_zero(block_width, encoder.encoder_id());
    return view;
  }
  std::vector<KahanSum> sums(block_width);
  for (const FunctionRecord& fn : functions) {
    const std::vector<double> numeric = function_numeric_descriptor(fn);
    for (std::size_t d = 0; d < kFunctionNumericDims; ++d) sums[d].add(numeric[d]);
    const EmbeddingVector conv = encoder.encode_token(fn.calling_convention);
    for (std::size_t d = 0; d < dimension; ++d) {
      if (conv.values[d] != 0.0) sums[kFunctionNumericDims + d].add(conv.values[d]);
    }
    if (fn.is_varargs) sums[block_width - 1].add(1.0);
  }
  view.pooled.encoder_id = encoder.encoder_id();
  view.pooled.values.resize(block_width);
  for (std::size_t d = 0; d < block_width; ++d) {
    view.pooled.values[d] = sums[d].sum / static_cast<double>(n);
  }
  view.pooled.normalized = false;
  return view;
}

ViewEmbedding build_symbol_view(const ArtifactBundle& bundle,
                                SymbolRecord::Kind kind,
                                const Encoder& encoder) {
  const std::size_t dimension = encoder.config().dimension;
  const auto& symbols =
      kind == SymbolRecord::Kind::Import ? bundle.imports : bundle.exports;

  ViewEmbedding view;
  view.view = kind == SymbolRecord::Kind::Import ? ViewKind::Imports
                                                 : ViewKind::Exports;
  view.element_count = symbols.size();

  std::vector<std::string> names, libraries, namespaces, sources, addresses;
  std::size_t primary_count = 0;
  for (const SymbolRecord& symbol : symbols) {
    names.push_back(symbol.name);
    libraries.push_back(symbol.library);
    namespaces.push_back(symbol.namespace_);
    sources.push_back(symbol.source);
    addresses.push_back(format_address(symbol.address));
    if (symbol.is_primary) ++primary_count;
  }

  const std::size_t n = symbols.size();
  view.fields.push_back(token_field("name", names, n, encoder));
  view.fields.push_back(token_field("library", libraries, n, encoder));
  view.fields.push_back(token_field("namespace", namespaces, n, encoder));
  view.fields.push_back(token_field("source", sources, n, encoder));
  view.fields.push_back(token_field("address", addresses, n, encoder));
  view.fields.push_back(indicator_field("is_primary", primary_count, n, encoder));

  if (n == 0) {
    view.pooled = EmbeddingVector::flagged_zero(dimension, encoder.encoder_id());
    return view;
  }

  // Per-element vector: mean over the six field slots, empty text fields
  // contributing zero. Elements are then mean-pooled.
  const EmbeddingVector primary_direction = encoder.encode_token("is_primary");
  std::vector<KahanSum> sums(dimension);
  for (const SymbolRecord& symbol : symbols) {
    std::vector<double> element(dimension, 0.0);
    auto add_token = [&](const std::string& token) {
      if (token.empty()) return;
      const EmbeddingVector image = encoder.encode_token(token);
      for (std::size_t d = 0; d < dimension; ++d) element[d] += image.values[d];
    };
    add_token(symbol.name);
    add_token(symbol.library);
    add_token(symbol.namespace_);
    add_token(symbol.source);
    add_token(format_address(symbol.address));
    if (symbol.is_primary) {
      for (std::size_t d = 0; d < dimension; ++d) {
        element[d] += primary_direction.values[d];
      }
    }
    const double slots = static_cast<double>(view.fields.size());
    for (std::size_t d = 0; d < dimension; ++d) {
      if (element[d] != 0.0) sums[d].add(element[d] / slots);
    }
  }
  view.pooled.encoder_id = encoder.encoder_id();
  view.pooled.values.resize(dimension);
  for (std::size_t d = 0; d < dimension; ++d) {
    view.pooled.values[d] = sums[d].sum / static_cast<double>(n);
  }
  view.pooled.normalized = l2_normalize(view.pooled.values);
  return view;
}

ViewEmbedding build_trace_view(const ArtifactBundle& bundle,
                               const Encoder& encoder, std::size_t ngram_n) {
  if (ngram_n < 1) {
    throw Error(ErrorKind::ConfigError, "ngram_n must be >= 1");
  }
  const std::size_t dimension = encoder.config().dimension;
  const auto& trace = bundle.trace;

  ViewEmbedding view;
  view.view = ViewKind::Traces;
  view.element_count = trace.size();

  if (trace.empty()) {
    for (std::string_view name : kTraceFields) {
      FieldEmbedding field;
      field.field_name = std::string(name);
      field.vector = EmbeddingVector::flagged_zero(dimension, encoder.encoder_id());
      view.fields.push_back(std::move(field));
    }
    view.pooled = EmbeddingVector::flagged_zero(dimension, encoder.encoder_id());
    return view;
  }

  std::vector<std::string> mnemonics;
  mnemonics.reserve(trace.size());
  std::array<std::uint64_t, kTraceCategoryCount> category_counts{};
  for (const TraceEvent& event : trace) {
    mnemonics.push_back(event.mnemonic);
    category_counts[static_cast<std::size_t>(event.category)] += 1;
  }

  // bag_of_ops: plain multiset of mnemonics.
  {
    FieldEmbedding field;
    field.field_name = "bag_of_ops";
    std::vector<KahanSum> sums(dimension);
    for (const std::string& mnemonic : mnemonics) {
      const std::vector<double> image = encoder.token_image(mnemonic);
      for (std::size_t d = 0; d < dimension; ++d) {
        if (image[d] != 0.0) sums[d].add(image[d]);
      }
    }
    field.vector.encoder_id = encoder.encoder_id();
    field.vector.values.resize(dimension);
    for (std::size_t d = 0; d < dimension; ++d) {
      field.vector.values[d] = sums[d].sum / static_cast<double>(mnemonics.size());
    }
    field.raw_norm = l2_norm(field.vector.values);
    field.vector.normalized = l2_normalize(field.vector.values);
    view.fields.push_back(std::move(field));
  }

  // op_ngrams over the whole mnemonic sequence; too-short traces leave the
  // field absent rather than failing.
  {
    FieldEmbedding field;
    field.field_name = "op_ngrams";
    if (mnemonics.size() < ngram_n) {
      field.vector = EmbeddingVector::flagged_zero(dimension, encoder.encoder_id());
    } else {
      const std::size_t count = mnemonics.size() - ngram_n + 1;
      std::vector<KahanSum> sums(dimension);
      for (std::size_t i = 0; i < count; ++i) {
        const std::vector<double> image =
            encoder.token_image(ngram_token(mnemonics, i, ngram_n));
        for (std::size_t d = 0; d < dimension; ++d) {
          if (image[d] != 0.0) sums[d].add(image[d]);
        }
      }
      field.vector.encoder_id = encoder.encoder_id();
      field.vector.values.resize(dimension);
      for (std::size_t d = 0; d < dimension; ++d) {
        field.vector.values[d] = sums[d].sum / static_cast<double>(count);
      }
      field.raw_norm = l2_norm(field.vector.values);
      field.vector.normalized = l2_normalize(field.vector.values);
    }
    view.fields.push_back(std::move(field));
  }

  // activity: normalized category frequencies in the leading coordinates.
  {
    std::vector<double> frequencies(kTraceCategoryCount);
    for (std::size_t c = 0; c < kTraceCategoryCount; ++c) {
      frequencies[c] = static_cast<double>(category_counts[c]) /
                       static_cast<double>(trace.size());
    }
    view.fields.push_back(layout_field("activity", frequencies, encoder));
  }

  // Consecutive non-overlapping windows; the last window keeps the
  // remainder. Window embeddings double as the PCA fit population.
  for (std::size_t start = 0; start < mnemonics.size();
       start += kTraceWindowEvents) {
    const std::size_t end =
        std::min(start + kTraceWindowEvents, mnemonics.size());
    if (end - start < ngram_n) continue;
    std::vector<std::string> tokens;
    tokens.reserve(end - start - ngram_n + 1);
    for (std::size_t i = start; i + ngram_n <= end; ++i) {
      tokens.push_back(ngram_token(mnemonics, i, ngram_n));
    }
    EmbeddingVector window = encoder.encode_multiset(tokens, EmptyPolicy::FlagZero);
    if (!window.normalized) continue;
    view.window_vectors.push_back(std::move(window.values));
  }

  if (view.window_vectors.size() < 2) {
    view.coherence = 1.0;
  } else {
    KahanSum total;
    for (std::size_t i = 0; i + 1 < view.window_vectors.size(); ++i) {
      total.add(cosine(std::span<const double>(view.window_vectors[i]),
                       std::span<const double>(view.window_vectors[i + 1])));
    }
    view.coherence =
        total.sum / static_cast<double>(view.window_vectors.size() - 1);
  }

  std::set<std::string> vocabulary(mnemonics.begin(), mnemonics.end());
  view.mnemonic_vocabulary.assign(vocabulary.begin(), vocabulary.end());

  view.pooled = pool_field_embeddings(view.fields, encoder);
  return view;
}

ViewEmbedding build_register_view(const ArtifactBundle& bundle,
                                  const Encoder& encoder) {
  const auto& trace = bundle.trace;

  ViewEmbedding view;
  view.view = ViewKind::Registers;

  std::vector<double> update_frequency(kRegisterFamilyCount, 0.0);
  std::vector<double> read_write_ratio(kRegisterFamilyCount, 0.0);
  std::vector<double> entropy(kRegisterFamilyCount, 0.0);

  const std::vector<RegisterSummary> summaries =
      summarize_registers(trace, bundle.identity.bitness);
  view.element_count = summaries.size();
  for (const RegisterSummary& summary : summaries) {
    const auto fam = static_cast<std::size_t>(summary.family);
    update_frequency[fam] = trace.empty()
                                ? 0.0
                                : static_cast<double>(summary.update_count) /
                                      static_cast<double>(trace.size());
    read_write_ratio[fam] = summary.read_write_ratio;
    entropy[fam] = context_entropy(summary.context_histogram);
  }

  view.fields.push_back(layout_field("update_frequency", update_frequency, encoder));
  view.fields.push_back(layout_field("read_write_ratio", read_write_ratio, encoder));
  view.fields.push_back(layout_field("context_entropy", entropy, encoder));

  view.pooled = pool_field_embeddings(view.fields, encoder);
  return view;
}

ArtifactViews build_views(const ArtifactBundle& bundle, const Encoder& encoder,
                          std::size_t ngram_n) {
  ArtifactViews out;
  out.artifact_id = bundle.identity.artifact_id;
  out.config = encoder.config();
  out.layout_version = formats::kFieldLayoutV1;
  out.ngram_n = ngram_n;
  out.views.push_back(build_function_view(bundle, encoder));
  out.views.push_back(build_symbol_view(bundle, SymbolRecord::Kind::Import, encoder));
  out.views.push_back(build_symbol_view(bundle, SymbolRecord::Kind::Export, encoder));
  out.views.push_back(build_trace_view(bundle, encoder, ngram_n));
  out.views.push_back(build_register_view(bundle, encoder));

  auto tag_list = [&](const char* prefix, const auto& records) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      out.provenance.push_back(
          {std::string(prefix) + "[" + std::to_string(i) + "]",
           records[i].provenance});
    }
  };
  tag_list("functions", bundle.functions);
  tag_list("imports", bundle.imports);
  tag_list("exports", bundle.exports);
  tag_list("trace", bundle.trace);
  return out;
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json vector_to_json(const EmbeddingVector& vector) {
  if (vector.absent()) return nullptr;
  ordered_json out;
  out["normalized"] = vector.normalized;
  out["values"] = vector.values;
  return out;
}

EmbeddingVector vector_from_json(const json& value, const std::string& encoder_id,
                                 const std::string& path) {
  if (value.is_null()) {
    return EmbeddingVector::flagged_zero(0, encoder_id);
  }
  if (!value.is_object() || !value.contains("normalized") ||
      !value.contains("values") || !value["values"].is_array()) {
    throw Error(ErrorKind::SchemaViolation,
                "expected null or {normalized, values}", path);
  }
  EmbeddingVector out;
  out.normalized = value["normalized"].get<bool>();
  out.values.reserve(value["values"].size());
  for (const auto& v : value["values"]) {
    if (!v.is_number()) {
      throw Error(ErrorKind::SchemaViolation, "vector entries must be numbers",
                  path + ".values");
    }
    out.values.push_back(v.get<double>());
  }
  out.encoder_id = encoder_id;
  return out;
}

}  // namespace

std::string views_to_json(const ArtifactViews& views) {
  ordered_json doc;
  doc["format"] = formats::kViewsV1;
  doc["artifact_id"] = views.artifact_id;
  doc["encoder_id"] = views.config.encoder_id;
  doc["layout_version"] = views.layout_version;
  ordered_json config;
  config["seed"] = views.config.seed;
  config["dimension"] = views.config.dimension;
  config["hashes_per_token"] = views.config.hashes_per_token;
  config["ngram_n"] = views.ngram_n;
  if (views.vectors_file) config["vectors_file"] = *views.vectors_file;
  else config["vectors_file"] = nullptr;
  doc["config"] = config;

  ordered_json view_list = ordered_json::array();
  for (const ViewEmbedding& view : views.views) {
    ordered_json entry;
    entry["view"] = std::string(view_name(view.view));
    entry["element_count"] = view.element_count;
    ordered_json fields = ordered_json::array();
    for (const FieldEmbedding& field : view.fields) {
      ordered_json f;
      f["field_name"] = field.field_name;
      f["raw_norm"] = field.raw_norm;
      f["vector"] = vector_to_json(field.vector);
      fields.push_back(std::move(f));
    }
    entry["fields"] = std::move(fields);
    entry["pooled"] = vector_to_json(view.pooled);
    if (view.pooled_pca) {
      entry["pooled_pca"] = vector_to_json(*view.pooled_pca);
    }
    if (view.view == ViewKind::Traces) {
      entry["coherence"] = view.coherence;
      entry["mnemonic_vocabulary"] = view.mnemonic_vocabulary;
      entry["window_vectors"] = view.window_vectors;
    }
    view_list.push_back(std::move(entry));
  }
  doc["views"] = std::move(view_list);

  ordered_json provenance = ordered_json::array();
  for (const ProvenanceEntry& entry : views.provenance) {
    ordered_json p;
    p["id"] = entry.element_id;
    p["source_tool"] = std::string(source_tool_name(entry.tag.source_tool));
    p["source_file"] = entry.tag.source_file;
    p["record_index"] = entry.tag.record_index;
    provenance.push_back(std::move(p));
  }
  doc["provenance"] = std::move(provenance);

  return doc.dump(2) + "\n";
}

ArtifactViews views_from_json(std::string_view file_text) {
  json doc;
  try {
    doc = json::parse(file_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaViolation,
                std::string("invalid JSON: ") + e.what(), "$");
  }
  if (!doc.is_object() || !doc.contains("format") || !doc["format"].is_string()) {
    throw Error(ErrorKind::SchemaViolation, "missing format", "$.format");
  }
  if (doc["format"].get<std::string>() != formats::kViewsV1) {
    throw Error(ErrorKind::SchemaViolation,
                "unsupported format, expected " + std::string(formats::kViewsV1),
                "$.format");
  }

  auto str = [&](const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key) || !obj[key].is_string()) {
      throw Error(ErrorKind::SchemaViolation, "missing string field",
                  path + "." + key);
    }
    return obj[key].get<std::string>();
  };
  auto uint_of = [&](const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key) || !obj[key].is_number_unsigned()) {
      throw Error(ErrorKind::SchemaViolation, "missing unsigned field",
                  path + "." + key);
    }
    return obj[key].get<std::uint64_t>();
  };

  ArtifactViews out;
  out.artifact_id = str(doc, "artifact_id", "$");
  out.config.encoder_id = str(doc, "encoder_id", "$");
  out.layout_version = str(doc, "layout_version", "$");
  if (!doc.contains("config") || !doc["config"].is_object()) {
    throw Error(ErrorKind::SchemaViolation, "missing config", "$.config");
  }
  const json& config = doc["config"];
  out.config.seed = uint_of(config, "seed", "$.config");
  out.config.dimension = uint_of(config, "dimension", "$.config");
  out.config.hashes_per_token = uint_of(config, "hashes_per_token", "$.config");
  out.ngram_n = uint_of(config, "ngram_n", "$.config");
  if (config.contains("vectors_file") && config["vectors_file"].is_string()) {
    out.vectors_file = config["vectors_file"].get<std::string>();
  }

  if (!doc.contains("views") || !doc["views"].is_array() ||
      doc["views"].size() != kViewOrder.size()) {
    throw Error(ErrorKind::SchemaViolation, "expected exactly 5 views",
                "$.views");
  }
  for (std::size_t i = 0; i < doc["views"].size(); ++i) {
    const std::string path = "views[" + std::to_string(i) + "]";
    const json& entry = doc["views"][i];
    ViewEmbedding view;
    view.view = view_from_name(str(entry, "view", path));
    if (view.view != kViewOrder[i]) {
      throw Error(ErrorKind::SchemaViolation, "views out of canonical order",
                  path + ".view");
    }
    view.element_count = uint_of(entry, "element_count", path);
    if (!entry.contains("fields") || !entry["fields"].is_array()) {
      throw Error(ErrorKind::SchemaViolation, "missing fields", path + ".fields");
    }
    for (std::size_t f = 0; f < entry["fields"].size(); ++f) {
      const json& fj = entry["fields"][f];
      const std::string fpath = path + ".fields[" + std::to_string(f) + "]";
      FieldEmbedding field;
      field.field_name = str(fj, "field_name", fpath);
      if (!fj.contains("raw_norm") || !fj["raw_norm"].is_number()) {
        throw Error(ErrorKind::SchemaViolation, "missing raw_norm",
                    fpath + ".raw_norm");
      }
      field.raw_norm = fj["raw_norm"].get<double>();
      if (!fj.contains("vector")) {
        throw Error(ErrorKind::SchemaViolation, "missing vector",
                    fpath + ".vector");
      }
      field.vector = vector_from_json(fj["vector"], out.config.encoder_id,
                                      fpath + ".vector");
      if (field.vector.values.empty()) {
        field.vector = EmbeddingVector::flagged_zero(out.config.dimension,
                                                     out.config.encoder_id);
      }
      view.fields.push_back(std::move(field));
    }
    if (!entry.contains("pooled")) {
      throw Error(ErrorKind::SchemaViolation, "missing pooled", path + ".pooled");
    }
    view.pooled =
        vector_from_json(entry["pooled"], out.config.encoder_id, path + ".pooled");
    if (view.pooled.values.empty()) {
      const std::size_t width =
          view.view == ViewKind::Functions
              ? kFunctionNumericDims + out.config.dimension + 1
              : out.config.dimension;
      view.pooled = EmbeddingVector::flagged_zero(width, out.config.encoder_id);
    }
    if (entry.contains("pooled_pca") && !entry["pooled_pca"].is_null()) {
      view.pooled_pca = vector_from_json(entry["pooled_pca"],
                                         out.config.encoder_id,
                                         path + ".pooled_pca");
    }
    if (view.view == ViewKind::Traces) {
      if (entry.contains("coherence") && entry["coherence"].is_number()) {
        view.coherence = entry["coherence"].get<double>();
      }
      if (entry.contains("mnemonic_vocabulary") &&
          entry["mnemonic_vocabulary"].is_array()) {
        for (const auto& m : entry["mnemonic_vocabulary"]) {
          if (!m.is_string()) {
            throw Error(ErrorKind::SchemaViolation, "expected strings",
                        path + ".mnemonic_vocabulary");
          }
          view.mnemonic_vocabulary.push_back(m.get<std::string>());
        }
      }
      if (entry.contains("window_vectors") && entry["window_vectors"].is_array()) {
        for (const auto& w : entry["window_vectors"]) {
          if (!w.is_array()) {
            throw Error(ErrorKind::SchemaViolation, "expected arrays",
                        path + ".window_vectors");
          }
          std::vector<double> window;
          window.reserve(w.size());
          for (const auto& v : w) {
            if (!v.is_number()) {
              throw Error(ErrorKind::SchemaViolation, "expected numbers",
                          path + ".window_vectors");
            }
            window.push_back(v.get<double>());
          }
          view.window_vectors.push_back(std::move(window));
        }
      }
    }
    out.views.push_back(std::move(view));
  }

  if (doc.contains("provenance") && doc["provenance"].is_array()) {
    for (std::size_t i = 0; i < doc["provenance"].size(); ++i) {
      const json& p = doc["provenance"][i];
      const std::string path = "provenance[" + std::to_string(i) + "]";
      ProvenanceEntry entry;
      entry.element_id = str(p, "id", path);
      entry.tag.source_tool = source_tool_from_name(str(p, "source_tool", path));
      entry.tag.source_file = str(p, "source_file", path);
      entry.tag.record_index = uint_of(p, "record_index", path);
      out.provenance.push_back(std::move(entry));
    }
  }
  return out;
}

}  // namespace bin2vec
