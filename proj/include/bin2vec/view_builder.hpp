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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bin2vec/encoder.hpp"
#include "bin2vec/types.hpp"

namespace bin2vec {

// Canonical view order; the global concatenation depends on it.
enum class ViewKind { Functions, Imports, Exports, Traces, Registers };

inline constexpr std::array<ViewKind, 5> kViewOrder = {
    ViewKind::Functions, ViewKind::Imports, ViewKind::Exports,
    ViewKind::Traces, ViewKind::Registers};

std::string_view view_name(ViewKind view);
ViewKind view_from_name(std::string_view name);  // throws SchemaViolation

// Fixed per-view field lists. These are the audit/radar axes; their names
// and order are pinned by the layout version so runs stay comparable.
std::span<const std::string_view> field_names_for(ViewKind view);

// Trace windows used for coherence and as the PCA fit population.
inline constexpr std::size_t kTraceWindowEvents = 256;

struct FieldEmbedding {
  std::string field_name;
  EmbeddingVector vector;  // unit-normalized, or flagged-zero when absent
  // Norm of the accumulated field vector before normalization. Kept for the
  // field-wise bar charts; for token fields this is the mean-image norm, for
  // indicator fields the indicator fraction.
  double raw_norm = 0.0;
};

struct ViewEmbedding {
  ViewKind view = ViewKind::Functions;
  std::vector<FieldEmbedding> fields;
  // Mean-pool of the per-element vectors. For the functions view this stays
  // unnormalized (normalized=false) until the comparison stage standardizes
  // the numeric block against the run population and renormalizes; all other
  // views are final at build time.
  EmbeddingVector pooled;
  std::optional<EmbeddingVector> pooled_pca;
  std::size_t element_count = 0;

  // Traces only.
  double coherence = 1.0;
  std::vector<std::string> mnemonic_vocabulary;       // sorted, distinct
  std::vector<std::vector<double>> window_vectors;    // normalized op-ngram
                                                      // embeddings per window
};

struct ProvenanceEntry {
  std::string element_id;  // e.g. "functions[3]", "trace[17]"
  ProvenanceTag tag;
};

// The five views of one artifact plus everything a later comparison needs
// to stay auditable: encoder configuration, field layout version, and the
// provenance index copied from the bundle.
struct ArtifactViews {
  std::string artifact_id;
  EncoderConfig config;
  std::string layout_version;
  std::size_t ngram_n = 2;
  std::optional<std::string> vectors_file;  // external token table, if any
  std::vector<ViewEmbedding> views;         // always 5, canonical order
  std::vector<ProvenanceEntry> provenance;

  const ViewEmbedding& view(ViewKind kind) const;
  ViewEmbedding& view(ViewKind kind);
};

// Per-function numeric descriptor [params, locals, in_degree, out_degree,
// log2(1 + size_bytes)]. The log tames the heavy tail of function sizes
// before batch standardization.
inline constexpr std::size_t kFunctionNumericDims = 5;
std::vector<double> function_numeric_descriptor(const FunctionRecord& fn);

ViewEmbedding build_function_view(const ArtifactBundle& bundle,
                                  const Encoder& encoder);
ViewEmbedding build_symbol_view(const ArtifactBundle& bundle,
                                SymbolRecord::Kind kind,
                                const Encoder& encoder);
ViewEmbedding build_trace_view(const ArtifactBundle& bundle,
                               const Encoder& encoder, std::size_t ngram_n);
ViewEmbedding build_register_view(const ArtifactBundle& bundle,
                                  const Encoder& encoder);

// Builds all five views in canonical order and copies the provenance index.
ArtifactViews build_views(const ArtifactBundle& bundle, const Encoder& encoder,
                          std::size_t ngram_n = 2);

// `bin2vec-views-v1` serialization. Vector values round-trip losslessly.
std::string views_to_json(const ArtifactViews& views);
ArtifactViews views_from_json(std::string_view file_text);

}  // namespace bin2vec
