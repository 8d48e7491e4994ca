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

#include <algorithm>
#include <cmath>

#include "bin2vec/errors.hpp"
#include "bin2vec/numerics.hpp"
#include "bin2vec/register_norm.hpp"
#include "bin2vec/view_builder.hpp"
#include "test_support.hpp"

using namespace bin2vec;
using namespace bin2vec::testing;

namespace {

Encoder default_encoder() { return Encoder(EncoderConfig{}); }

FunctionRecord make_function(std::string name, std::uint64_t address,
                             std::uint64_t params, std::uint64_t locals,
                             std::uint64_t in_degree, std::uint64_t out_degree,
                             std::uint64_t size, std::string convention = "cdecl",
                             bool varargs = false) {
  FunctionRecord fn;
  fn.name = std::move(name);
  fn.address = address;
  fn.parameter_count = params;
  fn.local_count = locals;
  fn.call_in_degree = in_degree;
  fn.call_out_degree = out_degree;
  fn.size_bytes = size;
  fn.calling_convention = std::move(convention);
  fn.is_varargs = varargs;
  fn.provenance = {SourceTool::StaticAnalyzer, "s.json", 0};
  return fn;
}

SymbolRecord make_symbol(SymbolRecord::Kind kind, std::string name,
                         std::string library, std::uint64_t address,
                         std::string namespace_token = "ns",
                         bool is_primary = true, std::string source = "iat") {
  SymbolRecord symbol;
  symbol.kind = kind;
  symbol.name = std::move(name);
  symbol.library = std::move(library);
  symbol.address = address;
  symbol.namespace_ = std::move(namespace_token);
  symbol.is_primary = is_primary;
  symbol.source = std::move(source);
  symbol.provenance = {SourceTool::StaticAnalyzer, "s.json", 0};
  return symbol;
}

ArtifactBundle empty_bundle(const std::string& id = "alpha",
                            Bitness bitness = Bitness::PE32) {
  ArtifactBundle bundle;
  bundle.identity = {id, bitness, 0x14C, 0x10B};
  return bundle;
}

const FieldEmbedding& field_of(const ViewEmbedding& view, std::string_view name) {
  for (const FieldEmbedding& field : view.fields) {
    if (field.field_name == name) return field;
  }
  REQUIRE(false);
  return view.fields.front();
}

}  // namespace

TEST_CASE("function descriptor applies the documented numeric transform") {
  const FunctionRecord fn = make_function("f", 0x1000, 2, 4, 1, 3, 16);
  const std::vector<double> numeric = function_numeric_descriptor(fn);
  CHECK(numeric ==
        std::vector<double>{2.0, 4.0, 1.0, 3.0, std::log2(17.0)});
}

TEST_CASE("single-function pooled block holds raw numerics pre-standardization") {
  const Encoder encoder = default_encoder();
  ArtifactBundle bundle = empty_bundle();
  bundle.functions.push_back(make_function("f", 0x1000, 2, 4, 1, 3, 16));

  const ViewEmbedding view = build_function_view(bundle, encoder);
  CHECK(view.element_count == 1);
  CHECK_FALSE(view.pooled.normalized);
  REQUIRE(view.pooled.dimension() ==
          kFunctionNumericDims + encoder.config().dimension + 1);
  CHECK(view.pooled.values[0] == 2.0);
  CHECK(view.pooled.values[1] == 4.0);
  CHECK(view.pooled.values[2] == 1.0);
  CHECK(view.pooled.values[3] == 3.0);
  CHECK(view.pooled.values[4] == doctest::Approx(std::log2(17.0)));
  CHECK(view.pooled.values.back() == 0.0);  // not varargs
}

TEST_CASE("duplicated elements do not move the mean pool") {
  const Encoder encoder = default_encoder();
  ArtifactBundle once = empty_bundle();
  once.functions.push_back(make_function("f", 0x1000, 2, 4, 1, 3, 16));
  ArtifactBundle twice = once;
  twice.functions.push_back(twice.functions[0]);
  twice.functions[1].address = 0x2000;

  const ViewEmbedding view_once = build_function_view(once, encoder);
  const ViewEmbedding view_twice = build_function_view(twice, encoder);
  REQUIRE(view_once.pooled.dimension() == view_twice.pooled.dimension());
  for (std::size_t d = 0; d < view_once.pooled.dimension(); ++d) {
    // The address field differs but the pooled element descriptor does not
    // include addresses, so the pooled vectors agree.
    CHECK(view_twice.pooled.values[d] ==
          doctest::Approx(view_once.pooled.values[d]).epsilon(1e-12));
  }
}

TEST_CASE("empty function list flags the view absent") {
  const Encoder encoder = default_encoder();
  const ViewEmbedding view = build_function_view(empty_bundle(), encoder);
  CHECK(view.element_count == 0);
  CHECK(view.pooled.absent());
  for (const FieldEmbedding& field : view.fields) {
    CHECK(field.vector.absent());
  }
}

TEST_CASE("function fields follow the fixed layout order") {
  const Encoder encoder = default_encoder();
  ArtifactBundle bundle = empty_bundle();
  bundle.functions.push_back(make_function("f", 0x1000, 2, 4, 1, 3, 16));
  const ViewEmbedding view = build_function_view(bundle, encoder);
  const auto expected = field_names_for(ViewKind::Functions);
  REQUIRE(view.fields.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(view.fields[i].field_name == expected[i]);
  }
}

TEST_CASE("identical symbol tables embed identically") {
  const Encoder encoder = default_encoder();
  ArtifactBundle a = empty_bundle("a");
  ArtifactBundle b = empty_bundle("b");
  for (ArtifactBundle* bundle : {&a, &b}) {
    bundle->imports.push_back(make_symbol(SymbolRecord::Kind::Import,
                                          "CreateFileW", "kernel32.dll", 0x2000));
    bundle->imports.push_back(make_symbol(SymbolRecord::Kind::Import, "send",
                                          "ws2_32.dll", 0x2004));
  }
  const ViewEmbedding view_a = build_symbol_view(a, SymbolRecord::Kind::Import, encoder);
  const ViewEmbedding view_b = build_symbol_view(b, SymbolRecord::Kind::Import, encoder);
  for (std::size_t f = 0; f < view_a.fields.size(); ++f) {
    CHECK(cosine(view_a.fields[f].vector, view_b.fields[f].vector) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(cosine(view_a.pooled, view_b.pooled) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("disjoint names with shared libraries split the field scores") {
  const Encoder encoder = default_encoder();
  ArtifactBundle a = empty_bundle("a");
  ArtifactBundle b = empty_bundle("b");
  for (int i = 0; i < 12; ++i) {
    a.imports.push_back(make_symbol(SymbolRecord::Kind::Import,
                                    "alpha_fn_" + std::to_string(i),
                                    "kernel32.dll", 0x2000 + i));
    b.imports.push_back(make_symbol(SymbolRecord::Kind::Import,
                                    "bravo_fn_" + std::to_string(i),
                                    "kernel32.dll", 0x2000 + i));
  }
  const ViewEmbedding view_a = build_symbol_view(a, SymbolRecord::Kind::Import, encoder);
  const ViewEmbedding view_b = build_symbol_view(b, SymbolRecord::Kind::Import, encoder);
  CHECK(cosine(field_of(view_a, "library").vector,
               field_of(view_b, "library").vector) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(cosine(field_of(view_a, "name").vector,
                         field_of(view_b, "name").vector)) < 0.3);
}

TEST_CASE("empty export list flags the view absent") {
  const Encoder encoder = default_encoder();
  const ViewEmbedding view =
      build_symbol_view(empty_bundle(), SymbolRecord::Kind::Export, encoder);
  CHECK(view.element_count == 0);
  CHECK(view.pooled.absent());
}

TEST_CASE("is_primary evidence mass equals the primary share") {
  const Encoder encoder = default_encoder();
  ArtifactBundle bundle = empty_bundle();
  bundle.imports.push_back(
      make_symbol(SymbolRecord::Kind::Import, "a", "k.dll", 1, "ns", true));
  bundle.imports.push_back(
      make_symbol(SymbolRecord::Kind::Import, "b", "k.dll", 2, "ns", false));
  bundle.imports.push_back(
      make_symbol(SymbolRecord::Kind::Import, "c", "k.dll", 3, "ns", false));
  bundle.imports.push_back(
      make_symbol(SymbolRecord::Kind::Import, "d", "k.dll", 4, "ns", true));
  const ViewEmbedding view =
      build_symbol_view(bundle, SymbolRecord::Kind::Import, encoder);
  CHECK(field_of(view, "is_primary").raw_norm == doctest::Approx(0.5));
}

TEST_CASE("activity frequencies follow the fixed category order") {
  const Encoder encoder = default_encoder();
  ArtifactBundle bundle = empty_bundle();
  bundle.trace.push_back(make_event(0, "mov", TraceCategory::MemoryRead));
  bundle.trace.push_back(make_event(1, "mov", TraceCategory::MemoryRead));
  bundle.trace.push_back(make_event(2, "jmp", TraceCategory::ControlFlow));
  bundle.trace.push_back(make_event(3, "add", TraceCategory::Arithmetic));

  const ViewEmbedding view = build_trace_view(bundle, encoder, 2);
  const FieldEmbedding& activity = field_of(view, "activity");
  // Frequencies (0.5, 0, 0.25, 0.25, 0, 0) before normalization.
  const std::vector<double> expected = {0.5, 0.0, 0.25, 0.25, 0.0, 0.0};
  const double norm = l2_norm(expected);
  CHECK(activity.raw_norm == doctest::Approx(norm));
  for (std::size_t c = 0; c < expected.size(); ++c) {
    CHECK(activity.vector.values[c] == doctest::Approx(expected[c] / norm));
  }
  for (std::size_t d = expected.size(); d < activity.vector.dimension(); ++d) {
    CHECK(activity.vector.values[d] == 0.0);
  }
}

TEST_CASE("bigram tokens cover consecutive mnemonics") {
  const Encoder encoder = default_encoder();
  ArtifactBundle bundle = empty_bundle();
  bundle.trace.push_back(make_event(0, "mov", TraceCategory::DataMove));
  bundle.trace.push_back(make_event(1, "add", TraceCategory::Arithmetic));
  bundle.trace.push_back(make_event(2, "mov", TraceCategory::DataMove));

  const ViewEmbedding view = build_trace_view(bundle, encoder, 2);
  const std::vector<std::string> expected_tokens = {"mov|add", "add|mov"};
  const EmbeddingVector expected =
      encode_token_multiset(expected_tokens, {}, encoder.config());
  const FieldEmbedding& ngrams = field_of(view, "op_ngrams");
  REQUIRE(ngrams.vector.dimension() == expected.dimension());
  for (std::size_t d = 0; d < expected.dimension(); ++d) {
    CHECK(ngrams.vector.values[d] == doctest::Approx(expected.values[d]).epsilon(1e-12));
  }
}

TEST_CASE("identical traces give unit field cosines") {
  const Encoder encoder = default_encoder();
  ArtifactBundle a = empty_bundle("a");
  ArtifactBundle b = empty_bundle("b");
  for (ArtifactBundle* bundle : {&a, &b}) {
    bundle->trace.push_back(make_event(0, "mov", TraceCategory::DataMove));
    bundle->trace.push_back(make_event(1, "add", TraceCategory::Arithmetic));
    bundle->trace.push_back(make_event(2, "jmp", TraceCategory::ControlFlow));
  }
  const ViewEmbedding view_a = build_trace_view(a, encoder, 2);
  const ViewEmbedding view_b = build_trace_view(b, encoder, 2);
  for (std::size_t f = 0; f < view_a.fields.size(); ++f) {
    CHECK(cosine(view_a.fields[f].vector, view_b.fields[f].vector) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("too-short traces leave op_ngrams absent without failing") {
  const Encoder encoder = default_encoder();
  ArtifactBundle bundle = empty_bundle();
  bundle.trace.push_back(make_event(0, "mov", TraceCategory::DataMove));
  const ViewEmbedding view = build_trace_view(bundle, encoder, 2);
  CHECK(field_of(view, "op_ngrams").vector.absent());
  CHECK_FALSE(field_of(view, "bag_of_ops").vector.absent());
  CHECK_FALSE(view.pooled.absent());
  CHECK(view.coherence == 1.0);
}

TEST_CASE("short traces produce one window and neutral coherence") {
  const Encoder encoder = default_encoder();
  ArtifactBundle bundle = empty_bundle();
  for (int i = 0; i < 10; ++i) {
    bundle.trace.push_back(make_event(i, "m" + std::to_string(i % 3),
                                      TraceCategory::Other));
  }
  const ViewEmbedding view = build_trace_view(bundle, encoder, 2);
  CHECK(view.window_vectors.size() == 1);
  CHECK(view.coherence == 1.0);
}

TEST_CASE("long traces produce windows and a bounded coherence") {
  const Encoder encoder = default_encoder();
  ArtifactBundle bundle = empty_bundle();
  for (int i = 0; i < 1000; ++i) {
    bundle.trace.push_back(make_event(i, "m" + std::to_string(i % 7),
                                      TraceCategory::Other));
  }
  const ViewEmbedding view = build_trace_view(bundle, encoder, 2);
  CHECK(view.window_vectors.size() == 4);  // 256, 256, 256, 232
  CHECK(view.coherence >= -1.0);
  CHECK(view.coherence <= 1.0);
  // A perfectly periodic trace gives near-identical windows.
  CHECK(view.coherence > 0.9);
}

TEST_CASE("register channels expose frequency, ratio and entropy") {
  const Encoder encoder = default_encoder();
  ArtifactBundle bundle = empty_bundle();
  // 10 events; ACC written in 5 of them.
  for (int i = 0; i < 10; ++i) {
    const bool writes_acc = i < 5;
    bundle.trace.push_back(make_event(
        i, "mov", i % 2 == 0 ? TraceCategory::Arithmetic : TraceCategory::MemoryRead,
        {}, writes_acc ? std::vector<std::string>{"eax"} : std::vector<std::string>{"ebx"}));
  }
  const ViewEmbedding view = build_register_view(bundle, encoder);
  const FieldEmbedding& frequency = field_of(view, "update_frequency");
  const std::size_t acc = static_cast<std::size_t>(RegisterFamily::Acc);
  // Normalized values times raw_norm restore the stored channel.
  CHECK(frequency.vector.values[acc] * frequency.raw_norm == doctest::Approx(0.5));
  CHECK(view.element_count == 2);
}

TEST_CASE("register view is absent without a trace") {
  const Encoder encoder = default_encoder();
  const ViewEmbedding view = build_register_view(empty_bundle(), encoder);
  CHECK(view.element_count == 0);
  CHECK(view.pooled.absent());
}

TEST_CASE("register layout is identical across bitnesses") {
  const Encoder encoder = default_encoder();
  ArtifactBundle pe32 = empty_bundle("a", Bitness::PE32);
  pe32.trace.push_back(make_event(0, "mov", TraceCategory::DataMove, {}, {"eax"}));
  ArtifactBundle pe64 = empty_bundle("b", Bitness::PE32Plus);
  pe64.trace.push_back(make_event(0, "mov", TraceCategory::DataMove, {}, {"rax"}));

  const ViewEmbedding view32 = build_register_view(pe32, encoder);
  const ViewEmbedding view64 = build_register_view(pe64, encoder);
  REQUIRE(view32.pooled.dimension() == view64.pooled.dimension());
  for (std::size_t d = 0; d < view32.pooled.dimension(); ++d) {
    CHECK(view32.pooled.values[d] == view64.pooled.values[d]);
  }
}

TEST_CASE("views are independent across evidence kinds") {
  const Encoder encoder = default_encoder();
  ArtifactBundle base = empty_bundle();
  base.functions.push_back(make_function("f", 0x1000, 2, 4, 1, 3, 16));
  base.imports.push_back(make_symbol(SymbolRecord::Kind::Import, "send",
                                     "ws2_32.dll", 0x2000));
  base.exports.push_back(make_symbol(SymbolRecord::Kind::Export, "init", "",
                                     0x3000));
  base.trace.push_back(make_event(0, "mov", TraceCategory::DataMove, {}, {"eax"}));

  ArtifactBundle modified = base;
  modified.trace.push_back(make_event(1, "add", TraceCategory::Arithmetic,
                                      {"eax"}, {"eax"}));

  const ArtifactViews views_base = build_views(base, encoder);
  const ArtifactViews views_modified = build_views(modified, encoder);
  for (ViewKind kind : {ViewKind::Functions, ViewKind::Imports, ViewKind::Exports}) {
    CHECK(views_base.view(kind).pooled.values ==
          views_modified.view(kind).pooled.values);  // bitwise
    for (std::size_t f = 0; f < views_base.view(kind).fields.size(); ++f) {
      CHECK(views_base.view(kind).fields[f].vector.values ==
            views_modified.view(kind).fields[f].vector.values);
    }
  }
  // The dynamic views did change.
  CHECK(views_base.view(ViewKind::Traces).pooled.values !=
        views_modified.view(ViewKind::Traces).pooled.values);
}

TEST_CASE("element order does not affect the views") {
  const Encoder encoder = default_encoder();
  ArtifactBundle forward = empty_bundle();
  for (int i = 0; i < 30; ++i) {
    forward.functions.push_back(make_function(
        "fn_" + std::to_string(i), 0x1000 + 16 * i, i % 5, i % 7, i % 3,
        i % 4, 16 + i, i % 2 == 0 ? "cdecl" : "stdcall", i % 6 == 0));
    forward.imports.push_back(make_symbol(SymbolRecord::Kind::Import,
                                          "imp_" + std::to_string(i), "k.dll",
                                          0x2000 + i, "ns", i % 2 == 0));
  }
  ArtifactBundle reversed = forward;
  std::reverse(reversed.functions.begin(), reversed.functions.end());
  std::reverse(reversed.imports.begin(), reversed.imports.end());

  const ArtifactViews views_forward = build_views(forward, encoder);
  const ArtifactViews views_reversed = build_views(reversed, encoder);
  for (ViewKind kind : {ViewKind::Functions, ViewKind::Imports}) {
    const ViewEmbedding& vf = views_forward.view(kind);
    const ViewEmbedding& vr = views_reversed.view(kind);
    for (std::size_t d = 0; d < vf.pooled.dimension(); ++d) {
      CHECK(vf.pooled.values[d] == doctest::Approx(vr.pooled.values[d]).epsilon(1e-12));
    }
    for (std::size_t f = 0; f < vf.fields.size(); ++f) {
      for (std::size_t d = 0; d < vf.fields[f].vector.dimension(); ++d) {
        CHECK(vf.fields[f].vector.values[d] ==
              doctest::Approx(vr.fields[f].vector.values[d]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("views round-trip through their on-disk form") {
  const Encoder encoder = default_encoder();
  ArtifactBundle bundle = empty_bundle();
  bundle.functions.push_back(make_function("f", 0x1000, 2, 4, 1, 3, 16));
  bundle.imports.push_back(make_symbol(SymbolRecord::Kind::Import, "send",
                                       "ws2_32.dll", 0x2000));
  for (int i = 0; i < 20; ++i) {
    bundle.trace.push_back(make_event(i, "m" + std::to_string(i % 3),
                                      TraceCategory::Other, {}, {"eax"}));
  }
  const ArtifactViews views = build_views(bundle, encoder);
  const std::string serialized = views_to_json(views);
  const ArtifactViews reparsed = views_from_json(serialized);

  CHECK(reparsed.artifact_id == views.artifact_id);
  CHECK(reparsed.config == views.config);
  CHECK(reparsed.ngram_n == views.ngram_n);
  REQUIRE(reparsed.views.size() == views.views.size());
  for (std::size_t v = 0; v < views.views.size(); ++v) {
    CHECK(reparsed.views[v].pooled.values == views.views[v].pooled.values);
    CHECK(reparsed.views[v].element_count == views.views[v].element_count);
    for (std::size_t f = 0; f < views.views[v].fields.size(); ++f) {
      CHECK(reparsed.views[v].fields[f].vector.values ==
            views.views[v].fields[f].vector.values);
      CHECK(reparsed.views[v].fields[f].raw_norm ==
            views.views[v].fields[f].raw_norm);
    }
  }
  CHECK(reparsed.view(ViewKind::Traces).coherence ==
        views.view(ViewKind::Traces).coherence);
  CHECK(reparsed.view(ViewKind::Traces).mnemonic_vocabulary ==
        views.view(ViewKind::Traces).mnemonic_vocabulary);
  CHECK(reparsed.view(ViewKind::Traces).window_vectors ==
        views.view(ViewKind::Traces).window_vectors);
  CHECK(reparsed.provenance.size() == views.provenance.size());

  // Canonical: a second serialization is byte-identical.
  CHECK(views_to_json(reparsed) == serialized);
}
