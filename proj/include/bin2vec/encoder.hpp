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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bin2vec {

struct EncoderConfig {
  std::string encoder_id = "hashing-v1";  // or "external:<name>"
  std::size_t dimension = 384;
  std::uint64_t seed = 42;
  std::size_t hashes_per_token = 4;

  void validate() const;  // dimension >= 8, hashes_per_token >= 1
  bool operator==(const EncoderConfig&) const = default;
};

// Fixed-length real vector plus enough state to tell "unit-normalized",
// "not yet normalized", and "absent evidence" apart. A flagged-zero vector
// (all zeros, normalized=false) means no evidence, which downstream scoring
// reports as absent rather than zero.
struct EmbeddingVector {
  std::vector<double> values;
  bool normalized = false;
  std::string encoder_id;

  std::size_t dimension() const { return values.size(); }
  bool absent() const;

  static EmbeddingVector flagged_zero(std::size_t dimension,
                                      std::string encoder_id);

  bool operator==(const EmbeddingVector&) const = default;
};

// FNV-1a 64-bit over a byte stream; the only hash the encoder relies on.
// Bit-exact across platforms and trivial to reimplement elsewhere.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes,
                      std::uint64_t state = 14695981039346656037ULL);

// Unnormalized hash image of a token: hashes_per_token FNV-1a-64 digests of
// (seed as 8 LE bytes || token bytes || i as 4 LE bytes), each contributing
// +-1 (sign = bit 63) at position (digest mod dimension).
std::vector<double> hash_token_image(std::string_view token,
                                     const EncoderConfig& config);

// L2-normalized hash image. Deterministic: depends only on (token bytes,
// config). Throws EmptyToken.
EmbeddingVector hash_encode_token(std::string_view token,
                                  const EncoderConfig& config);

enum class EmptyPolicy { Error, FlagZero };

// Weighted sum of unnormalized token images, L2-normalized at the end.
// With no weights every occurrence counts once (bag semantics), so repeated
// tokens and explicit integer weights are equivalent. An empty input either
// throws EmptyInput or yields a flagged-zero vector, per policy.
EmbeddingVector encode_token_multiset(std::span<const std::string> tokens,
                                      std::span<const double> weights,
                                      const EncoderConfig& config,
                                      EmptyPolicy empty_policy = EmptyPolicy::Error);

// Precomputed token -> vector table (`bin2vec-vectors-v1` JSON lines).
// Vectors are validated against config.dimension at load and stored
// L2-normalized. Lookups for missing tokens fall back to the hashing
// encoder, so a partial table still produces deterministic output.
class VectorProvider {
 public:
  // Throws SchemaViolation on malformed lines, DimensionMismatch when any
  // vector's length differs from config.dimension.
  static VectorProvider load(std::string_view file_text, std::string name,
                             const EncoderConfig& config);

  const std::string& name() const { return name_; }
  std::size_t size() const { return table_.size(); }
  const std::vector<double>* find(const std::string& token) const;

 private:
  std::string name_;
  std::unordered_map<std::string, std::vector<double>> table_;
};

// Front door used by the view builders: a seeded hashing encoder, optionally
// wrapping an external vector table with hashing fallback.
class Encoder {
 public:
  explicit Encoder(EncoderConfig config);
  Encoder(EncoderConfig config, VectorProvider provider);

  const EncoderConfig& config() const { return config_; }
  const std::string& encoder_id() const { return config_.encoder_id; }

  EmbeddingVector encode_token(std::string_view token) const;
  std::vector<double> token_image(std::string_view token) const;
  EmbeddingVector encode_multiset(
      std::span<const std::string> tokens,
      EmptyPolicy empty_policy = EmptyPolicy::Error) const;

 private:
  EncoderConfig config_;
  std::optional<VectorProvider> provider_;
};

}  // namespace bin2vec
