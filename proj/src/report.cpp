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

#include "bin2vec/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "bin2vec/errors.hpp"
#include "bin2vec/formats.hpp"
#include "bin2vec/register_norm.hpp"

namespace bin2vec {

std::string_view chart_kind_name(ChartKind kind) {
  switch (kind) {
    case ChartKind::BarFieldwise: return "bar_fieldwise";
    case ChartKind::RadarCosine: return "radar_cosine";
    case ChartKind::RadarTraceCoherenceCoverage:
      return "radar_trace_coherence_coverage";
    case ChartKind::BarRegisters: return "bar_registers";
  }
  return "radar_cosine";
}

namespace {

// Hand-rolled emitter: nine fixed decimals for reals, insertion-order keys,
// no locale involvement. The report's reproducibility contract is byte
// identity, which general-purpose serializers do not pin down.
class JsonWriter {
 public:
  std::string take() { return std::move(out_); }

  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(std::string_view name) {
    separate();
    append_string(name);
    out_ += ": ";
    pending_value_ = true;
  }

  void string(std::string_view value) {
    separate();
    append_string(value);
  }

  void boolean(bool value) {
    separate();
    out_ += value ? "true" : "false";
  }

  void null() {
    separate();
    out_ += "null";
  }

  void integer(std::uint64_t value) {
    separate();
    out_ += std::to_string(value);
  }

  void real(double value) {
    if (!std::isfinite(value)) {
      throw Error(ErrorKind::ConfigError, "non-finite value in report");
    }
    separate();
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", value);
    std::string text(buf);
    if (text[0] == '-' &&
        text.find_first_not_of("0.", 1) == std::string::npos) {
      text.erase(0, 1);  // normalize "-0.000000000"
    }
    out_ += text;
  }

  void optional_real(const std::optional<double>& value) {
    if (value) real(*value);
    else null();
  }

 private:
  void open(char c) {
    separate();
    out_ += c;
    need_comma_.push_back(false);
  }

  void close(char c) {
    const bool had_items = need_comma_.back();
    need_comma_.pop_back();
    if (had_items) {
      out_ += '\n';
      indent(need_comma_.size());
    }
    out_ += c;
  }

  // Inserts the comma/newline/indent before an element, unless this value
  // completes a pending "key: ".
  void separate() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (need_comma_.empty()) return;
    if (need_comma_.back()) out_ += ',';
    need_comma_.back() = true;
    out_ += '\n';
    indent(need_comma_.size());
  }

  void indent(std::size_t depth) { out_.append(2 * depth, ' '); }

  void append_string(std::string_view value) {
    out_ += '"';
    for (unsigned char c : value) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\b': out_ += "\\b"; break;
        case '\f': out_ += "\\f"; break;
        case '\n': out_ += "\\n"; break;
        case '\r': out_ += "\\r"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if (c < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += static_cast<char>(c);
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> need_comma_;
  bool pending_value_ = false;
};

const FieldEmbedding* find_field(const ViewEmbedding& view,
                                 std::string_view name) {
  for (const FieldEmbedding& field : view.fields) {
    if (field.field_name == name) return &field;
  }
  return nullptr;
}

std::vector<ChartSeries> build_charts(const SimilarityBreakdown& breakdown,
                                      const ArtifactViews& a,
                                      const ArtifactViews& b) {
  std::vector<ChartSeries> charts;
  const std::string pair_id = a.artifact_id + "|" + b.artifact_id;

  // Cosine radar per view, absent fields plotted as gaps.
  for (ViewKind kind : kViewOrder) {
    ChartSeries chart;
    chart.chart_kind = ChartKind::RadarCosine;
    chart.caption = "Field-wise cosine similarity, " +
                    std::string(view_name(kind)) + " view: " + pair_id;
    std::vector<std::optional<double>> values;
    for (const FieldScore& score : breakdown.field_scores) {
      if (score.view != kind) continue;
      chart.axis_labels.push_back(score.field_name);
      values.push_back(score.score);
    }
    chart.series.emplace_back(pair_id, std::move(values));
    charts.push_back(std::move(chart));
  }

  // Per-artifact field evidence mass (pre-comparison raw norms).
  for (ViewKind kind : kViewOrder) {
    ChartSeries chart;
    chart.chart_kind = ChartKind::BarFieldwise;
    chart.caption = "Per-field evidence mass, " + std::string(view_name(kind)) +
                    " view (accumulated embedding norm before normalization)";
    for (const FieldEmbedding& field : a.view(kind).fields) {
      chart.axis_labels.push_back(field.field_name);
    }
    auto series_for = [&](const ArtifactViews& views) {
      std::vector<std::optional<double>> values;
      for (const FieldEmbedding& field : views.view(kind).fields) {
        values.emplace_back(field.raw_norm);
      }
      return values;
    };
    chart.series.emplace_back(a.artifact_id, series_for(a));
    if (b.artifact_id != a.artifact_id) {
      chart.series.emplace_back(b.artifact_id, series_for(b));
    }
    charts.push_back(std::move(chart));
  }

  // Trace radar: coherence x coverage per trace field. Coverage is the
  // artifact's share of the pair's combined mnemonic vocabulary.
  {
    ChartSeries chart;
    chart.chart_kind = ChartKind::RadarTraceCoherenceCoverage;
    for (std::string_view name : field_names_for(ViewKind::Traces)) {
      chart.axis_labels.emplace_back(name);
    }
    const ViewEmbedding& traces_a = a.view(ViewKind::Traces);
    const ViewEmbedding& traces_b = b.view(ViewKind::Traces);
    if (traces_a.element_count == 0 || traces_b.element_count == 0) {
      chart.caption =
          "Trace coherence x coverage unavailable: at least one artifact has "
          "no trace evidence";
    } else {
      chart.caption = "Trace coherence x coverage per trace field: " + pair_id;
      std::set<std::string> combined(traces_a.mnemonic_vocabulary.begin(),
                                     traces_a.mnemonic_vocabulary.end());
      combined.insert(traces_b.mnemonic_vocabulary.begin(),
                      traces_b.mnemonic_vocabulary.end());
      const double union_size = static_cast<double>(combined.size());
      auto series_for = [&](const ArtifactViews& views) {
        const ViewEmbedding& traces = views.view(ViewKind::Traces);
        const double coverage =
            union_size == 0.0
                ? 0.0
                : static_cast<double>(traces.mnemonic_vocabulary.size()) /
                      union_size;
        std::vector<std::optional<double>> values;
        for (const FieldEmbedding& field : traces.fields) {
          if (field.vector.absent()) values.emplace_back(std::nullopt);
          else values.emplace_back(traces.coherence * coverage);
        }
        return values;
      };
      chart.series.emplace_back(a.artifact_id, series_for(a));
      if (b.artifact_id != a.artifact_id) {
        chart.series.emplace_back(b.artifact_id, series_for(b));
      }
    }
    charts.push_back(std::move(chart));
  }

  // Register bars: the update-frequency channel per family.
  {
    ChartSeries chart;
    chart.chart_kind = ChartKind::BarRegisters;
    chart.caption = "Register update frequency per canonical family";
    for (std::size_t fam = 0; fam < kRegisterFamilyCount; ++fam) {
      chart.axis_labels.emplace_back(
          register_family_name(static_cast<RegisterFamily>(fam)));
    }
    auto series_for = [&](const ArtifactViews& views,
                          std::vector<std::optional<double>>& out) {
      const ViewEmbedding& registers = views.view(ViewKind::Registers);
      const FieldEmbedding* field = find_field(registers, "update_frequency");
      if (field == nullptr || field->vector.absent()) return false;
      for (std::size_t fam = 0; fam < kRegisterFamilyCount; ++fam) {
        // layout_field stored the normalized vector; raw_norm restores scale.
        out.emplace_back(field->vector.values[fam] * field->raw_norm);
      }
      return true;
    };
    std::vector<std::optional<double>> values_a;
    if (series_for(a, values_a)) {
      chart.series.emplace_back(a.artifact_id, std::move(values_a));
    }
    if (b.artifact_id != a.artifact_id) {
      std::vector<std::optional<double>> values_b;
      if (series_for(b, values_b)) {
        chart.series.emplace_back(b.artifact_id, std::move(values_b));
      }
    }
    charts.push_back(std::move(chart));
  }

  return charts;
}

}  // namespace

ReportDocument render_report(const SimilarityBreakdown& breakdown,
                             const ArtifactViews& views_a,
                             const ArtifactViews& views_b,
                             const RunConfigEcho& config_echo) {
  ReportDocument report;
  report.format_version = formats::kReportV1;
  report.breakdown = breakdown;
  report.charts = build_charts(breakdown, views_a, views_b);
  for (const ProvenanceEntry& entry : views_a.provenance) {
    report.provenance_index[views_a.artifact_id + "/" + entry.element_id] =
        entry.tag;
  }
  for (const ProvenanceEntry& entry : views_b.provenance) {
    report.provenance_index[views_b.artifact_id + "/" + entry.element_id] =
        entry.tag;
  }
  report.config_echo = config_echo;
  return report;
}

namespace {

void write_weights(JsonWriter& w, const WeightVector& weights) {
  w.begin_object();
  for (ViewKind view : kViewOrder) {
    w.key(view_name(view));
    w.real(weights.weights.at(view));
  }
  w.end_object();
}

}  // namespace

std::string report_to_json(const ReportDocument& report) {
  JsonWriter w;
  w.begin_object();
  w.key("format");
  w.string(report.format_version);
  w.key("artifact_a");
  w.string(report.breakdown.artifact_a);
  w.key("artifact_b");
  w.string(report.breakdown.artifact_b);

  w.key("scores");
  w.begin_object();
  w.key("field_scores");
  w.begin_array();
  for (const FieldScore& score : report.breakdown.field_scores) {
    w.begin_object();
    w.key("view");
    w.string(view_name(score.view));
    w.key("field");
    w.string(score.field_name);
    w.key("score");
    w.optional_real(score.score);
    w.end_object();
  }
  w.end_array();
  w.key("view_scores");
  w.begin_object();
  for (ViewKind view : kViewOrder) {
    w.key(view_name(view));
    auto it = report.breakdown.view_scores.find(view);
    w.optional_real(it == report.breakdown.view_scores.end() ? std::nullopt
                                                             : it->second);
  }
  w.end_object();
  w.key("weighted_mean");
  w.real(report.breakdown.weighted_mean);
  w.key("global_cosine");
  w.real(report.breakdown.global_cosine);
  w.key("global_cosine_pca");
  w.optional_real(report.breakdown.global_cosine_pca);
  w.key("zeroed_views");
  w.begin_array();
  for (ViewKind view : report.breakdown.zeroed_views) {
    w.string(view_name(view));
  }
  w.end_array();
  w.end_object();

  w.key("weights_used");
  write_weights(w, report.breakdown.weights_used);
  w.key("encoder_id");
  w.string(report.breakdown.encoder_id);
  w.key("std_population");
  w.string(std_population_name(report.breakdown.std_population));

  w.key("charts");
  w.begin_array();
  for (const ChartSeries& chart : report.charts) {
    w.begin_object();
    w.key("chart_kind");
    w.string(chart_kind_name(chart.chart_kind));
    w.key("caption");
    w.string(chart.caption);
    w.key("axis_labels");
    w.begin_array();
    for (const std::string& label : chart.axis_labels) w.string(label);
    w.end_array();
    w.key("series");
    w.begin_object();
    for (const auto& [id, values] : chart.series) {
      w.key(id);
      w.begin_array();
      for (const auto& value : values) w.optional_real(value);
      w.end_array();
    }
    w.end_object();
    w.end_object();
  }
  w.end_array();

  w.key("provenance_index");
  w.begin_object();
  for (const auto& [id, tag] : report.provenance_index) {
    w.key(id);
    w.begin_object();
    w.key("source_tool");
    w.string(source_tool_name(tag.source_tool));
    w.key("source_file");
    w.string(tag.source_file);
    w.key("record_index");
    w.integer(tag.record_index);
    w.end_object();
  }
  w.end_object();

  w.key("config_echo");
  w.begin_object();
  w.key("tool_version");
  w.string(formats::kToolVersion);
  w.key("encoder");
  w.string(report.config_echo.encoder_id);
  w.key("seed");
  w.integer(report.config_echo.seed);
  w.key("dimension");
  w.integer(report.config_echo.dimension);
  w.key("hashes_per_token");
  w.integer(report.config_echo.hashes_per_token);
  w.key("ngram_n");
  w.integer(report.config_echo.ngram_n);
  w.key("vectors_file");
  if (report.config_echo.vectors_file) w.string(*report.config_echo.vectors_file);
  else w.null();
  w.key("std_population");
  w.string(std_population_name(report.config_echo.std_population));
  w.key("pca_k");
  if (report.config_echo.pca_k) w.integer(*report.config_echo.pca_k);
  else w.null();
  w.key("weights");
  write_weights(w, report.config_echo.weights);
  w.key("layout_version");
  w.string(report.config_echo.layout_version);
  w.key("formats");
  w.begin_object();
  w.key("static");
  w.string(formats::kStaticV1);
  w.key("trace");
  w.string(formats::kTraceV1);
  w.key("bundle");
  w.string(formats::kBundleV1);
  w.key("views");
  w.string(formats::kViewsV1);
  w.key("vectors");
  w.string(formats::kVectorsV1);
  w.key("report");
  w.string(formats::kReportV1);
  w.end_object();
  w.end_object();

  w.end_object();
  std::string out = w.take();
  out += '\n';
  return out;
}

}  // namespace bin2vec
