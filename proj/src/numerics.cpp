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

#include "bin2vec/numerics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "bin2vec/encoder.hpp"
#include "bin2vec/errors.hpp"

namespace bin2vec {

double l2_norm(std::span<const double> values) {
  KahanSum sum;
  for (double v : values) sum.add(v * v);
  return std::sqrt(sum.sum);
}

bool l2_normalize(std::vector<double>& values) {
  const double norm = l2_norm(values);
  if (norm == 0.0 || !std::isfinite(norm)) return false;
  for (double& v : values) v /= norm;
  return true;
}

double cosine(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "cosine of vectors with dimensions " +
                    std::to_string(x.size()) + " and " +
                    std::to_string(y.size()));
  }
  KahanSum dot;
  KahanSum xx;
  KahanSum yy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot.add(x[i] * y[i]);
    xx.add(x[i] * x[i]);
    yy.add(y[i] * y[i]);
  }
  if (xx.sum == 0.0 || yy.sum == 0.0) {
    throw Error(ErrorKind::ZeroVector, "cosine requires two nonzero vectors");
  }
  // sqrt of the product (not the product of sqrts) keeps exact cases like
  // antipodal integer vectors exact.
  return std::clamp(dot.sum / std::sqrt(xx.sum * yy.sum), -1.0, 1.0);
}

double cosine(const EmbeddingVector& x, const EmbeddingVector& y) {
  return cosine(std::span<const double>(x.values),
                std::span<const double>(y.values));
}

std::string_view std_population_name(StdPopulation population) {
  return population == StdPopulation::Pair ? "pair" : "batch";
}

StdPopulation std_population_from_name(std::string_view name) {
  if (name == "pair") return StdPopulation::Pair;
  if (name == "batch") return StdPopulation::Batch;
  throw Error(ErrorKind::ConfigError,
              "unknown standardization population '" + std::string(name) +
                  "', expected pair or batch");
}

namespace {

std::size_t checked_uniform_dimension(std::span<const std::vector<double>> rows) {
  const std::size_t dim = rows.front().size();
  for (const auto& row : rows) {
    if (row.size() != dim) {
      throw Error(ErrorKind::DimensionMismatch, "rows have mixed dimensions");
    }
  }
  return dim;
}

}  // namespace

StandardizationStats fit_standardizer(
    std::span<const std::vector<double>> rows, StdPopulation population) {
  if (rows.empty()) {
    throw Error(ErrorKind::EmptyInput, "cannot fit standardizer on zero rows");
  }
  const std::size_t dim = checked_uniform_dimension(rows);
  const double n = static_cast<double>(rows.size());

  StandardizationStats stats;
  stats.population = population;
  stats.means.resize(dim);
  stats.stds.resize(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    KahanSum sum;
    for (const auto& row : rows) sum.add(row[d]);
    stats.means[d] = sum.sum / n;
  }
  for (std::size_t d = 0; d < dim; ++d) {
    KahanSum squares;
    for (const auto& row : rows) {
      const double delta = row[d] - stats.means[d];
      squares.add(delta * delta);
    }
    stats.stds[d] = std::sqrt(squares.sum / n);
  }
  return stats;
}

std::vector<double> apply_standardizer(std::span<const double> row,
                                       const StandardizationStats& stats) {
  if (row.size() != stats.means.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "row dimension " + std::to_string(row.size()) +
                    " does not match stats dimension " +
                    std::to_string(stats.means.size()));
  }
  std::vector<double> out(row.size());
  for (std::size_t d = 0; d < row.size(); ++d) {
    out[d] = stats.stds[d] == 0.0 ? 0.0 : (row[d] - stats.means[d]) / stats.stds[d];
  }
  return out;
}

std::vector<double> mean_pool(std::span<const std::vector<double>> rows) {
  if (rows.empty()) {
    throw Error(ErrorKind::EmptyInput, "cannot mean-pool zero vectors");
  }
  const std::size_t dim = checked_uniform_dimension(rows);
  const double n = static_cast<double>(rows.size());
  std::vector<double> out(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    KahanSum sum;
    for (const auto& row : rows) sum.add(row[d]);
    out[d] = sum.sum / n;
  }
  return out;
}

namespace {

// Largest-|entry| coordinate made positive, ties broken by lowest index.
void apply_sign_convention(std::vector<double>& component) {
  std::size_t pivot = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < component.size(); ++i) {
    const double magnitude = std::fabs(component[i]);
    if (magnitude > best) {
      best = magnitude;
      pivot = i;
    }
  }
  if (component[pivot] < 0.0) {
    for (double& v : component) v = -v;
  }
}

}  // namespace

PCAModel pca_fit(std::span<const std::vector<double>> rows, std::size_t k) {
  if (rows.size() < 2) {
    throw Error(ErrorKind::InsufficientRows,
                "PCA needs at least 2 rows, got " + std::to_string(rows.size()));
  }
  const std::size_t dim = checked_uniform_dimension(rows);
  const std::size_t k_max = std::min(rows.size() - 1, dim);
  if (k < 1 || k > k_max) {
    throw Error(ErrorKind::KTooLarge,
                "k=" + std::to_string(k) + " exceeds min(rows-1, dimension)=" +
                    std::to_string(k_max));
  }

  PCAModel model;
  model.input_dimension = dim;
  model.k = k;
  model.mean = mean_pool(rows);

  // Population covariance of the centered rows, accumulated with
  // compensated sums so the result is independent of row count quirks.
  const double n = static_cast<double>(rows.size());
  Eigen::MatrixXd covariance(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      KahanSum sum;
      for (const auto& row : rows) {
        sum.add((row[i] - model.mean[i]) * (row[j] - model.mean[j]));
      }
      const double value = sum.sum / n;
      covariance(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
      covariance(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConfigError, "eigendecomposition failed to converge");
  }

  // Eigen returns eigenvalues in increasing order; take the top k.
  model.components.reserve(k);
  model.explained_variance.reserve(k);
  for (std::size_t c = 0; c < k; ++c) {
    const Eigen::Index col = static_cast<Eigen::Index>(dim - 1 - c);
    std::vector<double> component(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      component[i] = solver.eigenvectors()(static_cast<Eigen::Index>(i), col);
    }
    apply_sign_convention(component);
    model.components.push_back(std::move(component));
    model.explained_variance.push_back(std::max(0.0, solver.eigenvalues()(col)));
  }
  return model;
}

std::vector<double> pca_transform(std::span<const double> row,
                                  const PCAModel& model) {
  if (row.size() != model.input_dimension) {
    throw Error(ErrorKind::DimensionMismatch,
                "row dimension " + std::to_string(row.size()) +
                    " does not match PCA input dimension " +
                    std::to_string(model.input_dimension));
  }
  std::vector<double> out(model.k);
  for (std::size_t c = 0; c < model.k; ++c) {
    KahanSum sum;
    for (std::size_t i = 0; i < row.size(); ++i) {
      sum.add(model.components[c][i] * (row[i] - model.mean[i]));
    }
    out[c] = sum.sum;
  }
  return out;
}

}  // namespace bin2vec
