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

#include "bin2vec/encoder.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "bin2vec/errors.hpp"
#include "bin2vec/numerics.hpp"

namespace bin2vec {

namespace {

constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv_mix(std::uint64_t state, const std::uint8_t* data,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    state ^= data[i];
    state *= kFnvPrime;
  }
  return state;
}

void store_le(std::uint64_t value, std::uint8_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<std::uint8_t>(value >> (8 * i));
  }
}

}  // namespace

void EncoderConfig::validate() const {
  if (dimension < 8) {
    throw Error(ErrorKind::ConfigError, "encoder dimension must be >= 8");
  }
  if (hashes_per_token < 1) {
    throw Error(ErrorKind::ConfigError, "hashes_per_token must be >= 1");
  }
  if (encoder_id.empty()) {
    throw Error(ErrorKind::ConfigError, "encoder_id must be non-empty");
  }
}

bool EmbeddingVector::absent() const {
  if (normalized) return false;
  for (double v : values) {
    if (v != 0.0) return false;
  }
  return true;
}

EmbeddingVector EmbeddingVector::flagged_zero(std::size_t dimension,
                                              std::string encoder_id) {
  EmbeddingVector out;
  out.values.assign(dimension, 0.0);
  out.normalized = false;
  out.encoder_id = std::move(encoder_id);
  return out;
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes,
                      std::uint64_t state) {
  return fnv_mix(state, bytes.data(), bytes.size());
}

std::vector<double> hash_token_image(std::string_view token,
                                     const EncoderConfig& config) {
  if (token.empty()) {
    throw Error(ErrorKind::EmptyToken, "cannot encode an empty token");
  }
  std::uint8_t seed_bytes[8];
  store_le(config.seed, seed_bytes, 8);
  std::uint64_t base = fnv1a64({seed_bytes, 8});
  base = fnv_mix(base, reinterpret_cast<const std::uint8_t*>(token.data()),
                 token.size());

  std::vector<double> image(config.dimension, 0.0);
  for (std::size_t i = 0; i < config.hashes_per_token; ++i) {
    std::uint8_t index_bytes[4];
    store_le(i, index_bytes, 4);
    const std::uint64_t digest = fnv1a64({index_bytes, 4}, base);
    const std::size_t position = digest % config.dimension;
    image[position] += (digest >> 63) ? -1.0 : 1.0;
  }
  return image;
}

EmbeddingVector hash_encode_token(std::string_view token,
                                  const EncoderConfig& config) {
  EmbeddingVector out;
  out.values = hash_token_image(token, config);
  out.encoder_id = config.encoder_id;
  out.normalized = l2_normalize(out.values);
  return out;
}

EmbeddingVector encode_token_multiset(std::span<const std::string> tokens,
                                      std::span<const double> weights,
                                      const EncoderConfig& config,
                                      EmptyPolicy empty_policy) {
  if (!weights.empty() && weights.size() != tokens.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "weights length does not match token count");
  }
  if (tokens.empty()) {
    if (empty_policy == EmptyPolicy::Error) {
      throw Error(ErrorKind::EmptyInput, "empty token multiset");
    }
    return EmbeddingVector::flagged_zero(config.dimension, config.encoder_id);
  }
  for (double w : weights) {
    if (!(w > 0.0)) {
      throw Error(ErrorKind::ConfigError, "multiset weights must be positive");
    }
  }

  std::vector<KahanSum> accum(config.dimension);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const double weight = weights.empty() ? 1.0 : weights[t];
    const std::vector<double> image = hash_token_image(tokens[t], config);
    for (std::size_t d = 0; d < config.dimension; ++d) {
      if (image[d] != 0.0) accum[d].add(weight * image[d]);
    }
  }

  EmbeddingVector out;
  out.values.resize(config.dimension);
  for (std::size_t d = 0; d < config.dimension; ++d) {
    out.values[d] = accum[d].sum;
  }
  out.encoder_id = config.encoder_id;
  out.normalized = l2_normalize(out.values);
  return out;
}

VectorProvider VectorProvider::load(std::string_view file_text,
                                    std::string name,
                                    const EncoderConfig& config) {
  VectorProvider provider;
  provider.name_ = std::move(name);

  std::istringstream stream{std::string(file_text)};
  std::string line;
  std::size_t line_index = 0;
  for (; std::getline(stream, line); ++line_index) {
    const std::string path = "vectors[" + std::to_string(line_index) + "]";
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::SchemaViolation,
                  std::string("invalid JSON: ") + e.what(), path);
    }
    if (!row.is_object() || !row.contains("token") || !row.contains("vector")) {
      throw Error(ErrorKind::SchemaViolation,
                  "expected an object with 'token' and 'vector'", path);
    }
    if (!row["token"].is_string() || row["token"].get<std::string>().empty()) {
      throw Error(ErrorKind::SchemaViolation, "token must be a non-empty string",
                  path + ".token");
    }
    if (!row["vector"].is_array()) {
      throw Error(ErrorKind::SchemaViolation, "vector must be an array",
                  path + ".vector");
    }
    std::vector<double> values;
    values.reserve(row["vector"].size());
    for (const auto& v : row["vector"]) {
      if (!v.is_number()) {
        throw Error(ErrorKind::SchemaViolation, "vector entries must be numbers",
                    path + ".vector");
      }
      values.push_back(v.get<double>());
    }
    if (values.size() != config.dimension) {
      throw Error(ErrorKind::DimensionMismatch,
                  "provider vector has dimension " +
                      std::to_string(values.size()) + ", encoder expects " +
                      std::to_string(config.dimension),
                  path + ".vector");
    }
    l2_normalize(values);
    // Later entries for the same token override earlier ones.
    provider.table_[row["token"].get<std::string>()] = std::move(values);
  }
  return provider;
}

const std::vector<double>* VectorProvider::find(const std::string& token) const {
  auto it = table_.find(token);
  return it == table_.end() ? nullptr : &it->second;
}

Encoder::Encoder(EncoderConfig config) : config_(std::move(config)) {
  config_.validate();
}

Encoder::Encoder(EncoderConfig config, VectorProvider provider)
    : config_(std::move(config)), provider_(std::move(provider)) {
  config_.validate();
}

EmbeddingVector Encoder::encode_token(std::string_view token) const {
  if (provider_) {
    if (const std::vector<double>* hit = provider_->find(std::string(token))) {
      EmbeddingVector out;
      out.values = *hit;
      out.encoder_id = config_.encoder_id;
      out.normalized = l2_norm(out.values) > 0.0;
      return out;
    }
  }
  return hash_encode_token(token, config_);
}

std::vector<double> Encoder::token_image(std::string_view token) const {
  if (provider_) {
    if (const std::vector<double>* hit = provider_->find(std::string(token))) {
      return *hit;
    }
  }
  return hash_token_image(token, config_);
}

EmbeddingVector Encoder::encode_multiset(std::span<const std::string> tokens,
                                         EmptyPolicy empty_policy) const {
  if (!provider_) {
    return encode_token_multiset(tokens, {}, config_, empty_policy);
  }
  if (tokens.empty()) {
    if (empty_policy == EmptyPolicy::Error) {
      throw Error(ErrorKind::EmptyInput, "empty token multiset");
    }
    return EmbeddingVector::flagged_zero(config_.dimension, config_.encoder_id);
  }
  std::vector<KahanSum> accum(config_.dimension);
  for (const std::string& token : tokens) {
    const std::vector<double> image = token_image(token);
    for (std::size_t d = 0; d < config_.dimension; ++d) {
      if (image[d] != 0.0) accum[d].add(image[d]);
    }
  }
  EmbeddingVector out;
  out.values.resize(config_.dimension);
  for (std::size_t d = 0; d < config_.dimension; ++d) {
    out.values[d] = accum[d].sum;
  }
  out.encoder_id = config_.encoder_id;
  out.normalized = l2_normalize(out.values);
  return out;
}

}  // namespace bin2vec
