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

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace bin2vec {

struct EmbeddingVector;

// Compensated (Kahan) accumulator. All pooling and covariance sums go
// through this so scores stay stable to the 1e-9 tolerances the test suite
// pins, independent of platform.
struct KahanSum {
  double sum = 0.0;
  double compensation = 0.0;

  void add(double x) {
    double y = x - compensation;
    double t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
  }
};

double l2_norm(std::span<const double> values);

// Scales to unit norm in place; returns false (and leaves the vector
// untouched) when the norm is zero.
bool l2_normalize(std::vector<double>& values);

// Cosine similarity x.y / (|x| |y|), clamped to [-1, 1] against rounding.
// Throws DimensionMismatch, ZeroVector.
double cosine(std::span<const double> x, std::span<const double> y);
double cosine(const EmbeddingVector& x, const EmbeddingVector& y);

enum class StdPopulation { Pair, Batch };

std::string_view std_population_name(StdPopulation population);
StdPopulation std_population_from_name(std::string_view name);  // throws ConfigError

// Per-dimension population mean / population standard deviation (divide
// by N) over a set of rows. The population tag only records which policy
// produced the stats.
struct StandardizationStats {
  std::vector<double> means;
  std::vector<double> stds;
  StdPopulation population = StdPopulation::Batch;
};

// Throws EmptyInput, DimensionMismatch (ragged rows).
StandardizationStats fit_standardizer(
    std::span<const std::vector<double>> rows, StdPopulation population);

// (row - means) / stds elementwise; dimensions with std 0 map to 0 exactly.
// Throws DimensionMismatch.
std::vector<double> apply_standardizer(std::span<const double> row,
                                       const StandardizationStats& stats);

// Elementwise arithmetic mean. Throws EmptyInput, DimensionMismatch.
std::vector<double> mean_pool(std::span<const std::vector<double>> rows);

// Top-k principal components of the mean-centered population covariance
// (divide by N). Components are orthonormal rows with a fixed sign
// convention: the entry of largest absolute value is positive, ties broken
// by lowest index. Explained variances are non-increasing and clamped at 0.
struct PCAModel {
  std::vector<std::vector<double>> components;  // k rows of input_dimension
  std::vector<double> explained_variance;       // non-increasing, >= 0
  std::vector<double> mean;                     // training mean, for transform
  std::size_t input_dimension = 0;
  std::size_t k = 0;
};

// Requires rows >= 2 and 1 <= k <= min(rows - 1, dimension).
// Throws InsufficientRows, KTooLarge, DimensionMismatch.
PCAModel pca_fit(std::span<const std::vector<double>> rows, std::size_t k);

// components . (row - training mean). Throws DimensionMismatch.
std::vector<double> pca_transform(std::span<const double> row,
                                  const PCAModel& model);

}  // namespace bin2vec
