// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#pragma once

/**
 * @file ngram_model.hpp
 * Additively smoothed n-gram language model over a Vocabulary.
 *
 * The model is the toolkit's deterministic desk-scale scoring source: it
 * emits full conditional distributions P(w_t | w_<t), so every statistic a
 * detector needs can be computed exactly and hand-checked.
 *
 * Conventions (all load-bearing for reproducibility):
 *  - Contexts are the previous order-1 token ids, left-padded with BOS, so
 *    position 0 of every sequence is scored like any other position.
 *  - P(w | ctx) = (count(ctx, w) + delta) / (total(ctx) + delta * |V|).
 *  - A context never seen in training yields the uniform distribution when
 *    delta > 0 and a ZeroMassContextError when delta = 0.
 *  - Natural log everywhere.
 */

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "detectorbench/rng.hpp"
#include "detectorbench/vocabulary.hpp"

namespace detectorbench {

class NGramModel {
 public:
  /// Exact occurrence counts with BOS padding; order >= 1, delta >= 0,
  /// corpus non-empty. Throws std::invalid_argument otherwise.
  static NGramModel train(std::span<const std::vector<std::int32_t>> corpus,
                          Vocabulary vocabulary, int order, double delta);

  int order() const { return order_; }
  double delta() const { return delta_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  std::size_t context_count() const { return contexts_.size(); }

  /// Full probability vector over the vocabulary given arbitrary left
  /// context (only the last order-1 ids matter; shorter contexts are
  /// BOS-padded). Sums to 1 within 1e-9.
  std::vector<double> next_distribution(std::span<const std::int32_t> context) const;

  /// True if the (padded, truncated) context was observed in training.
  bool context_seen(std::span<const std::int32_t> context) const;

  // --- sampling ------------------------------------------------------------

  /// One draw from the temperature-scaled distribution. temperature = 0 is
  /// argmax with ties broken by smallest token id. UNK and BOS are masked
  /// out of the sampling support (they are control tokens, not text).
  std::int32_t sample_next(std::span<const std::int32_t> context, double temperature,
                           SplitMix64& rng) const;

  /// Autoregressive continuation of `prompt`; the prompt itself is not part
  /// of the return value. Deterministic given (model, prompt, temperature,
  /// seed). max_tokens >= 1, temperature >= 0.
  std::vector<std::int32_t> sample_continuation(std::span<const std::int32_t> prompt,
                                                int max_tokens, double temperature,
                                                std::uint64_t seed) const;

  /// Continuation of the empty prompt: a fresh document of `length` tokens.
  std::vector<std::int32_t> sample_sequence(int length, double temperature,
                                            std::uint64_t seed) const;

  // --- serialization ---------------------------------------------------------

  /// Self-describing format: format_version, vocabulary, order, delta and
  /// exact integer counts. from_json(to_json(m)) == m.
  nlohmann::json to_json() const;
  static NGramModel from_json(const nlohmann::json& j);

  void save(const std::filesystem::path& path) const;
  static NGramModel load(const std::filesystem::path& path);

  bool operator==(const NGramModel& other) const;

 private:
  struct ContextCounts {
    std::map<std::int32_t, std::uint64_t> counts;  // token id -> occurrences
    std::uint64_t total = 0;

    bool operator==(const ContextCounts&) const = default;
  };

  NGramModel(Vocabulary vocab, int order, double delta)
      : vocab_(std::move(vocab)), order_(order), delta_(delta) {}

  /// Packs the last order-1 ids (BOS padded) into a byte-string map key.
  std::string pack_context(std::span<const std::int32_t> context) const;
  static std::vector<std::int32_t> unpack_context(std::string_view key);

  Vocabulary vocab_;
  int order_;
  double delta_;
  std::unordered_map<std::string, ContextCounts> contexts_;
};

/// Convenience for plumbing and tests: one corpus sequence per line of
/// `text`, vocabulary built from the corpus itself.
NGramModel train_ngram_from_text(const std::string& text, int order, double delta);

}  // namespace detectorbench
