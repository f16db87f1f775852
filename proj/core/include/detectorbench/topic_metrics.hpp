// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#pragma once

/**
 * @file topic_metrics.hpp
 * Topic entropy and its relation to detection performance.
 *
 * Topic entropy summarizes how open-ended a topic's human-authored text is
 * under a scoring backend, in nats per token. Two readings are supported
 * and reported side by side:
 *   shannon       mean predictive entropy H(w_t | w_<t) over all positions
 *   observed_nll  mean -log P(actual token | w_<t) over all positions
 * Averaging is token-weighted across the whole dataset, not
 * per-document-then-averaged.
 */

#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include <json.hpp>

#include "detectorbench/corpus.hpp"
#include "detectorbench/scoring.hpp"

namespace detectorbench {

enum class TopicEntropyMode { Shannon, ObservedNll };

std::string_view to_string(TopicEntropyMode mode);
TopicEntropyMode topic_entropy_mode_from_string(std::string_view name);

struct TopicEntropyReport {
  std::string topic;
  TopicEntropyMode mode = TopicEntropyMode::ObservedNll;
  double value = 0.0;  // nats per token
  int document_count = 0;
  std::int64_t token_count = 0;
};

void to_json(nlohmann::json& j, const TopicEntropyReport& r);

/// Documents must be non-empty and human-authored (topic entropy
/// characterizes the human side of a topic); otherwise throws
/// std::invalid_argument naming the offending document.
TopicEntropyReport topic_entropy(const ScoringBackend& backend,
                                 std::span<const Document> documents,
                                 TopicEntropyMode mode, int jobs = 1);

struct CorrelationResult {
  double pearson = 0.0;
  double spearman = 0.0;
};

/// Pearson and Spearman (average ranks for ties) over (topic entropy,
/// detection metric) points. Requires >= 3 finite pairs; zero variance in
/// either coordinate raises UndefinedCorrelationError.
CorrelationResult entropy_performance_correlation(
    std::span<const std::pair<double, double>> pairs);

}  // namespace detectorbench
