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
#include <span>
#include <string>
#include <vector>

#include "bin2vec/numerics.hpp"
#include "bin2vec/view_builder.hpp"

namespace bin2vec {

// Per-view weights for the weighted mean of view scores. All weights are
// positive; at scoring time they are renormalized over the views actually
// present, so scaling every weight by a constant changes nothing.
struct WeightVector {
  std::map<ViewKind, double> weights;
  bool normalized = false;

  static WeightVector uniform();
  void validate() const;     // throws ConfigError on missing/non-positive
  WeightVector normalize() const;
};

struct FieldScore {
  ViewKind view = ViewKind::Functions;
  std::string field_name;
  std::optional<double> score;  // nullopt = absent on at least one side
};

struct SimilarityBreakdown {
  std::string artifact_a;
  std::string artifact_b;
  std::vector<FieldScore> field_scores;  // canonical view order, field order
  std::map<ViewKind, std::optional<double>> view_scores;
  double weighted_mean = 0.0;
  double global_cosine = 0.0;
  std::optional<double> global_cosine_pca;
  WeightVector weights_used;
  std::string encoder_id;
  StdPopulation std_population = StdPopulation::Batch;
  std::vector<ViewKind> zeroed_views;  // blocks zeroed in the concatenation
};

// Verifies two view sets were built with the same encoder configuration and
// field layout. Throws EncoderMismatch / LayoutMismatch.
void check_comparable(const ArtifactViews& a, const ArtifactViews& b);

// Pools happen at build time; this stage standardizes the pooled function
// numeric block against the run population and renormalizes, which is the
// only batch-dependent part of a view. Views without functions are left
// untouched. Idempotent per ArtifactViews instance.
StandardizationStats fit_function_numeric_stats(
    std::span<const ArtifactViews* const> run, StdPopulation population);
void finalize_views(ArtifactViews& views, const StandardizationStats* stats);

// Shared PCA over every artifact's trace windows; the reduced trace vector
// backs the PCA variant of the global score. Throws InsufficientRows /
// KTooLarge when the run has too few usable windows.
PCAModel fit_trace_pca(std::span<const ArtifactViews* const> run, std::size_t k);
void apply_trace_pca(ArtifactViews& views, const PCAModel& model);

std::vector<FieldScore> compare_fields(const ArtifactViews& a,
                                       const ArtifactViews& b);
std::map<ViewKind, std::optional<double>> compare_views(const ArtifactViews& a,
                                                        const ArtifactViews& b);

// Global cosine over the fixed-order concatenation of the pooled view
// vectors. A view absent on either side contributes a zero block on both
// sides symmetrically. Also returns the weighted mean of the present view
// scores. Throws NoCommonViews when nothing is shared.
struct GlobalScores {
  double global_cosine = 0.0;
  double weighted_mean = 0.0;
  std::optional<double> global_cosine_pca;
  std::vector<ViewKind> zeroed_views;
};
GlobalScores global_similarity(const ArtifactViews& a, const ArtifactViews& b,
                               const WeightVector& weights);

// Full pairwise scoring: fields, views, weighted mean, global cosines.
// Both sides must be finalized first.
SimilarityBreakdown compare_artifacts(const ArtifactViews& a,
                                      const ArtifactViews& b,
                                      const WeightVector& weights,
                                      StdPopulation std_population);

}  // namespace bin2vec
