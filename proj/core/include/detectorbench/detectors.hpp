// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#pragma once

/**
 * @file detectors.hpp
 * Zero-shot detection statistics. Each detector maps a document to one
 * scalar, oriented so that higher means more likely machine-generated:
 *
 *   logp      mean token log-probability
 *   rank      negated mean token rank
 *   logrank   negated mean ln(rank)
 *   entropy   mean predictive entropy (flip available; the orientation of
 *             this statistic is convention, not consensus)
 *   detectgpt mean-logp discrepancy between the document and perturbed
 *             variants of it, optionally normalized by the perturbed
 *             scores' standard deviation
 */

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "detectorbench/ngram_model.hpp"
#include "detectorbench/scoring.hpp"

namespace detectorbench {

enum class DetectorKind { LogP, Rank, LogRank, Entropy, DetectGpt };

std::string_view to_string(DetectorKind kind);
DetectorKind detector_kind_from_string(std::string_view name);

struct DetectorConfig {
  DetectorKind kind = DetectorKind::LogP;
  // DetectGPT knobs; ignored by the four simple statistics.
  int perturbations = 10;
  double mask_fraction = 0.15;
  int span_length = 2;
  bool normalize = true;
  std::uint64_t seed = 0;
  // Inverts the score orientation of any detector.
  bool flip = false;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;

  nlohmann::json to_json() const;
};

// --- statistics over a SequenceScoring --------------------------------------
// All throw ScoringError on an empty scoring.

double logp_statistic(const SequenceScoring& scoring);
double rank_statistic(const SequenceScoring& scoring);
double logrank_statistic(const SequenceScoring& scoring);
double entropy_statistic(const SequenceScoring& scoring);

// --- DetectGPT ---------------------------------------------------------------

/// Replaces approximately mask_fraction of `tokens` with model samples:
/// round(mask_fraction * len / span_length) non-overlapping spans (at least
/// one), each resampled left-to-right at temperature 1 conditioned on the
/// already-perturbed prefix. Length preserving, deterministic given seed.
/// Throws std::invalid_argument if the document is shorter than one span.
std::vector<std::int32_t> perturb_spans(const NGramModel& model,
                                        std::span<const std::int32_t> tokens,
                                        double mask_fraction, int span_length,
                                        std::uint64_t seed);

struct DetectGptResult {
  double score = 0.0;            // raw or normalized per config
  double raw_discrepancy = 0.0;  // logp(original) - mean logp(perturbed)
  int tokens_used = 0;
  int identical_perturbations = 0;
  bool all_identical = false;  // score forced to 0; caller should warn
};

/// Perturbation seeds derive from (config.seed, fnv1a64(document_id)), so
/// document scoring order and parallelism cannot change results.
DetectGptResult detectgpt_statistic(const ScoringBackend& backend,
                                    const Perturber& perturber, const std::string& text,
                                    const DetectorConfig& config,
                                    std::string_view document_id);

// --- per-document driver -----------------------------------------------------

struct DocumentScore {
  std::string document_id;
  DetectorKind kind = DetectorKind::LogP;
  double score = 0.0;
  int tokens_used = 0;
};

void to_json(nlohmann::json& j, const DocumentScore& s);
void from_json(const nlohmann::json& j, DocumentScore& s);

/// Binds a backend, an optional perturber (required for detectgpt) and a
/// DetectorConfig into a pure document -> DocumentScore function.
class DetectorRunner {
 public:
  DetectorRunner(std::shared_ptr<const ScoringBackend> backend,
                 std::shared_ptr<const Perturber> perturber, DetectorConfig config);

  DocumentScore score(std::string_view document_id, const std::string& text) const;

  const DetectorConfig& config() const { return config_; }
  const ScoringBackend& backend() const { return *backend_; }

  /// Hash over (detector config, backend id); stamped into every report.
  std::string config_hash() const { return config_hash_; }

 private:
  std::shared_ptr<const ScoringBackend> backend_;
  std::shared_ptr<const Perturber> perturber_;
  DetectorConfig config_;
  std::string config_hash_;
};

}  // namespace detectorbench
