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

#include "bin2vec/comparison.hpp"

#include <algorithm>

#include "bin2vec/errors.hpp"

namespace bin2vec {

WeightVector WeightVector::uniform() {
  WeightVector out;
  for (ViewKind view : kViewOrder) out.weights[view] = 0.2;
  out.normalized = true;
  return out;
}

void WeightVector::validate() const {
  for (ViewKind view : kViewOrder) {
    auto it = weights.find(view);
    if (it == weights.end()) {
      throw Error(ErrorKind::ConfigError,
                  "missing weight for view '" + std::string(view_name(view)) + "'");
    }
    if (!(it->second > 0.0)) {
      throw Error(ErrorKind::ConfigError,
                  "weight for view '" + std::string(view_name(view)) +
                      "' must be positive");
    }
  }
}

WeightVector WeightVector::normalize() const {
  validate();
  double total = 0.0;
  for (const auto& [view, weight] : weights) total += weight;
  WeightVector out;
  for (const auto& [view, weight] : weights) out.weights[view] = weight / total;
  out.normalized = true;
  return out;
}

void check_comparable(const ArtifactViews& a, const ArtifactViews& b) {
  if (a.config.encoder_id != b.config.encoder_id) {
    throw Error(ErrorKind::EncoderMismatch,
                "encoder '" + a.config.encoder_id + "' vs '" +
                    b.config.encoder_id + "'");
  }
  if (a.config.seed != b.config.seed ||
      a.config.dimension != b.config.dimension ||
      a.config.hashes_per_token != b.config.hashes_per_token) {
    throw Error(ErrorKind::EncoderMismatch,
                "encoder configurations differ (seed/dimension/hashes_per_token)");
  }
  if (a.layout_version != b.layout_version) {
    throw Error(ErrorKind::LayoutMismatch,
                "field layout '" + a.layout_version + "' vs '" +
                    b.layout_version + "'");
  }
  if (a.ngram_n != b.ngram_n) {
    throw Error(ErrorKind::LayoutMismatch,
                "ngram_n " + std::to_string(a.ngram_n) + " vs " +
                    std::to_string(b.ngram_n));
  }
  if (a.views.size() != kViewOrder.size() || b.views.size() != kViewOrder.size()) {
    throw Error(ErrorKind::LayoutMismatch, "expected 5 views per artifact");
  }
  for (std::size_t v = 0; v < kViewOrder.size(); ++v) {
    const ViewEmbedding& va = a.views[v];
    const ViewEmbedding& vb = b.views[v];
    if (va.fields.size() != vb.fields.size()) {
      throw Error(ErrorKind::LayoutMismatch,
                  "field lists differ for view '" +
                      std::string(view_name(kViewOrder[v])) + "'");
    }
    for (std::size_t f = 0; f < va.fields.size(); ++f) {
      if (va.fields[f].field_name != vb.fields[f].field_name) {
        throw Error(ErrorKind::LayoutMismatch,
                    "field '" + va.fields[f].field_name + "' vs '" +
                        vb.fields[f].field_name + "' in view '" +
                        std::string(view_name(kViewOrder[v])) + "'");
      }
    }
  }
}

StandardizationStats fit_function_numeric_stats(
    std::span<const ArtifactViews* const> run, StdPopulation population) {
  std::vector<std::vector<double>> rows;
  for (const ArtifactViews* views : run) {
    const ViewEmbedding& fn = views->view(ViewKind::Functions);
    // Already-finalized views no longer carry the raw numeric block.
    if (fn.element_count == 0 || fn.pooled.absent() || fn.pooled.normalized) {
      continue;
    }
    rows.emplace_back(fn.pooled.values.begin(),
                      fn.pooled.values.begin() + kFunctionNumericDims);
  }
  if (rows.empty()) {
    // No artifact in the run has functions; return degenerate stats that
    // finalize_views will skip.
    StandardizationStats stats;
    stats.population = population;
    return stats;
  }
  return fit_standardizer(rows, population);
}

void finalize_views(ArtifactViews& views, const StandardizationStats* stats) {
  ViewEmbedding& fn = views.view(ViewKind::Functions);
  if (fn.element_count == 0 || fn.pooled.absent() || fn.pooled.normalized) {
    return;
  }
  if (stats != nullptr && !stats->means.empty()) {
    const std::vector<double> standardized = apply_standardizer(
        std::span<const double>(fn.pooled.values.data(), kFunctionNumericDims),
        *stats);
    std::copy(standardized.begin(), standardized.end(), fn.pooled.values.begin());
  } else {
    // Without run statistics the numeric block carries no comparable scale;
    // drop it and keep the categorical part.
    std::fill(fn.pooled.values.begin(),
              fn.pooled.values.begin() + kFunctionNumericDims, 0.0);
  }
  fn.pooled.normalized = l2_normalize(fn.pooled.values);
}

PCAModel fit_trace_pca(std::span<const ArtifactViews* const> run, std::size_t k) {
  std::vector<std::vector<double>> rows;
  for (const ArtifactViews* views : run) {
    const ViewEmbedding& traces = views->view(ViewKind::Traces);
    for (const auto& window : traces.window_vectors) rows.push_back(window);
  }
  return pca_fit(rows, k);
}

void apply_trace_pca(ArtifactViews& views, const PCAModel& model) {
  ViewEmbedding& traces = views.view(ViewKind::Traces);
  if (traces.pooled.absent()) {
    traces.pooled_pca.reset();
    return;
  }
  EmbeddingVector reduced;
  reduced.encoder_id = traces.pooled.encoder_id;
  reduced.values = pca_transform(traces.pooled.values, model);
  reduced.normalized = l2_normalize(reduced.values);
  traces.pooled_pca = std::move(reduced);
}

namespace {

bool view_present(const ArtifactViews& views, ViewKind kind) {
  return !views.view(kind).pooled.absent();
}

}  // namespace

std::vector<FieldScore> compare_fields(const ArtifactViews& a,
                                       const ArtifactViews& b) {
  check_comparable(a, b);
  std::vector<FieldScore> out;
  for (std::size_t v = 0; v < kViewOrder.size(); ++v) {
    const ViewEmbedding& va = a.views[v];
    const ViewEmbedding& vb = b.views[v];
    for (std::size_t f = 0; f < va.fields.size(); ++f) {
      FieldScore score;
      score.view = kViewOrder[v];
      score.field_name = va.fields[f].field_name;
      if (!va.fields[f].vector.absent() && !vb.fields[f].vector.absent()) {
        score.score = cosine(va.fields[f].vector, vb.fields[f].vector);
      }
      out.push_back(std::move(score));
    }
  }
  return out;
}

std::map<ViewKind, std::optional<double>> compare_views(const ArtifactViews& a,
                                                        const ArtifactViews& b) {
  check_comparable(a, b);
  std::map<ViewKind, std::optional<double>> out;
  for (ViewKind kind : kViewOrder) {
    if (view_present(a, kind) && view_present(b, kind)) {
      out[kind] = cosine(a.view(kind).pooled, b.view(kind).pooled);
    } else {
      out[kind] = std::nullopt;
    }
  }
  return out;
}

namespace {

// Concatenates pooled view vectors in canonical order. Views listed as
// zeroed get a zero block on both sides; a zero block adds nothing to the
// dot product or the norms, so it is emitted as an empty block, which also
// keeps the two concatenations the same length when the absent view's
// stored width differs (the functions block is wider than the others).
// When `use_pca` is set the traces block is the PCA-reduced vector.
std::vector<double> concatenated(const ArtifactViews& views,
                                 const std::vector<ViewKind>& zeroed,
                                 bool use_pca) {
  std::vector<double> out;
  for (ViewKind kind : kViewOrder) {
    if (std::find(zeroed.begin(), zeroed.end(), kind) != zeroed.end()) {
      continue;
    }
    const ViewEmbedding& view = views.view(kind);
    const EmbeddingVector* block = &view.pooled;
    if (use_pca && kind == ViewKind::Traces) {
      block = view.pooled_pca ? &*view.pooled_pca : &view.pooled;
    }
    out.insert(out.end(), block->values.begin(), block->values.end());
  }
  return out;
}

double weighted_mean_over(const std::map<ViewKind, std::optional<double>>& scores,
                          const WeightVector& weights) {
  std::vector<std::pair<double, double>> present;  // (weight, score)
  for (ViewKind view : kViewOrder) {
    const auto& score = scores.at(view);
    if (!score) continue;
    present.emplace_back(weights.weights.at(view), *score);
  }
  if (present.empty()) {
    throw Error(ErrorKind::NoCommonViews,
                "no view is present on both sides");
  }
  // With equal weights the renormalized weight is exactly 1/n: sum the
  // scores in canonical view order and divide, so the result is exactly the
  // arithmetic mean.
  const bool all_equal =
      std::all_of(present.begin(), present.end(), [&](const auto& p) {
        return p.first == present.front().first;
      });
  if (all_equal) {
    double sum = 0.0;
    for (const auto& [weight, score] : present) sum += score;
    return sum / static_cast<double>(present.size());
  }
  double numerator = 0.0;
  double denominator = 0.0;
  for (const auto& [weight, score] : present) {
    numerator += weight * score;
    denominator += weight;
  }
  return numerator / denominator;
}

}  // namespace

GlobalScores global_similarity(const ArtifactViews& a, const ArtifactViews& b,
                               const WeightVector& weights) {
  check_comparable(a, b);
  weights.validate();

  GlobalScores out;
  bool any_common = false;
  for (ViewKind kind : kViewOrder) {
    if (view_present(a, kind) && view_present(b, kind)) {
      any_common = true;
    } else {
      out.zeroed_views.push_back(kind);
    }
  }
  if (!any_common) {
    throw Error(ErrorKind::NoCommonViews, "no view is present on both sides");
  }

  const std::vector<double> concat_a = concatenated(a, out.zeroed_views, false);
  const std::vector<double> concat_b = concatenated(b, out.zeroed_views, false);
  out.global_cosine = cosine(std::span<const double>(concat_a),
                             std::span<const double>(concat_b));

  out.weighted_mean = weighted_mean_over(compare_views(a, b), weights);

  const ViewEmbedding& traces_a = a.view(ViewKind::Traces);
  const ViewEmbedding& traces_b = b.view(ViewKind::Traces);
  const bool traces_common =
      std::find(out.zeroed_views.begin(), out.zeroed_views.end(),
                ViewKind::Traces) == out.zeroed_views.end();
  if (traces_a.pooled_pca && traces_b.pooled_pca && traces_common) {
    const std::vector<double> pca_a = concatenated(a, out.zeroed_views, true);
    const std::vector<double> pca_b = concatenated(b, out.zeroed_views, true);
    out.global_cosine_pca = cosine(std::span<const double>(pca_a),
                                   std::span<const double>(pca_b));
  }
  return out;
}

SimilarityBreakdown compare_artifacts(const ArtifactViews& a,
                                      const ArtifactViews& b,
                                      const WeightVector& weights,
                                      StdPopulation std_population) {
  SimilarityBreakdown out;
  out.artifact_a = a.artifact_id;
  out.artifact_b = b.artifact_id;
  out.field_scores = compare_fields(a, b);
  out.view_scores = compare_views(a, b);
  GlobalScores global = global_similarity(a, b, weights);
  out.weighted_mean = global.weighted_mean;
  out.global_cosine = global.global_cosine;
  out.global_cosine_pca = global.global_cosine_pca;
  out.zeroed_views = std::move(global.zeroed_views);
  out.weights_used = weights.normalize();
  out.encoder_id = a.config.encoder_id;
  out.std_population = std_population;
  return out;
}

}  // namespace bin2vec
