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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bin2vec/comparison.hpp"
#include "bin2vec/view_builder.hpp"

namespace bin2vec {

enum class ChartKind {
  BarFieldwise,
  RadarCosine,
  RadarTraceCoherenceCoverage,
  BarRegisters,
};

std::string_view chart_kind_name(ChartKind kind);

// Chart-ready data; plotting is left to whatever consumes the report.
// Every series has exactly one value (possibly null) per axis label.
struct ChartSeries {
  ChartKind chart_kind = ChartKind::RadarCosine;
  std::string caption;
  std::vector<std::string> axis_labels;
  // Insertion-ordered (artifact id or "a|b" pair id) -> values.
  std::vector<std::pair<std::string, std::vector<std::optional<double>>>> series;
};

// Everything needed to reproduce the report byte-for-byte from the same
// inputs.
struct RunConfigEcho {
  std::string encoder_id;
  std::uint64_t seed = 42;
  std::size_t dimension = 384;
  std::size_t hashes_per_token = 4;
  std::size_t ngram_n = 2;
  std::optional<std::string> vectors_file;
  StdPopulation std_population = StdPopulation::Batch;
  std::optional<std::size_t> pca_k;
  WeightVector weights;  // as configured, before renormalization
  std::string layout_version;
};

struct ReportDocument {
  std::string format_version;
  SimilarityBreakdown breakdown;
  std::vector<ChartSeries> charts;
  // "<artifact_id>/<element_id>" -> provenance, sorted by key.
  std::map<std::string, ProvenanceTag> provenance_index;
  RunConfigEcho config_echo;
};

// Builds the report: cosine radars and evidence-mass bars per view, the
// trace coherence-times-coverage radar, the per-family register bars, the
// merged provenance index, and the configuration echo.
ReportDocument render_report(const SimilarityBreakdown& breakdown,
                             const ArtifactViews& views_a,
                             const ArtifactViews& views_b,
                             const RunConfigEcho& config_echo);

// Canonical `bin2vec-report-v1` text: stable key order, reals fixed at nine
// decimals with "-0.0" normalized away, so identical inputs give identical
// bytes.
std::string report_to_json(const ReportDocument& report);

}  // namespace bin2vec
