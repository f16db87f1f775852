// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#pragma once

/**
 * @file scoring.hpp
 * Per-token scoring substrate and the backend interfaces detectors consume.
 *
 * A SequenceScoring is everything a detector needs about a document: for
 * every token position, the natural-log probability of the actual token,
 * its competition rank (1 + number of strictly more probable tokens, ties
 * share the smallest rank) and the Shannon entropy of the full predicted
 * distribution, in nats.
 */

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace detectorbench {

struct TokenScore {
  std::int32_t position = 0;
  std::int32_t token_id = -1;  // -1 when the backend's id space is not local
  double log_prob = 0.0;       // <= 0
  std::int32_t rank = 1;       // >= 1
  double entropy = 0.0;        // [0, ln |V|]

  bool operator==(const TokenScore&) const = default;
};

struct SequenceScoring {
  std::vector<std::int32_t> token_ids;   // empty for remote scorings
  std::vector<std::string> token_texts;  // one per scored position
  std::vector<TokenScore> scores;

  std::size_t size() const { return scores.size(); }
  bool operator==(const SequenceScoring&) const = default;
};

void to_json(nlohmann::json& j, const TokenScore& s);
void from_json(const nlohmann::json& j, TokenScore& s);
void to_json(nlohmann::json& j, const SequenceScoring& s);
void from_json(const nlohmann::json& j, SequenceScoring& s);

/// A source of token-wise conditional statistics: the built-in n-gram model
/// or a remote LLM service. Implementations must be safe for concurrent use
/// after construction.
class ScoringBackend {
 public:
  virtual ~ScoringBackend() = default;

  /// Stable identifier recorded in provenance (content hash for builtin
  /// models, model@endpoint for remote ones).
  virtual std::string id() const = 0;

  /// Scores every token of `text`. Throws ScoringError on empty input.
  virtual SequenceScoring score_text(const std::string& text) const = 0;

  /// Samples a continuation of `prompt_text`; the prompt is not included in
  /// the result. temperature 0 means argmax decoding.
  virtual std::string generate(const std::string& prompt_text, int max_tokens,
                               double temperature, std::uint64_t seed) const = 0;
};

/// Produces `count` perturbed variants of a text (the DetectGPT mask/refill
/// step). Implementations must be deterministic given their inputs; the
/// remote implementation delegates determinism to the server + cache and
/// ignores `seed`.
class Perturber {
 public:
  virtual ~Perturber() = default;

  virtual std::vector<std::string> perturb(const std::string& text, double mask_fraction,
                                           int span_length, int count,
                                           std::uint64_t seed) const = 0;
};

}  // namespace detectorbench
