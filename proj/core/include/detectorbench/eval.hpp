// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#pragma once

/**
 * @file eval.hpp
 * Detection evaluation: AUROC, FPR at fixed TPR, balanced pairings, topic
 * transfer matrices, topic mixtures and score-distribution exports.
 *
 * AUROC follows the exact Mann-Whitney formulation
 *   (#{(m, h): m > h} + 0.5 #{m = h}) / (|M| |H|)
 * computed in integer arithmetic via sorting, so the fast path equals the
 * quadratic brute force bit for bit.
 *
 * FPR95 convention: positive class = machine-generated. The threshold is
 * the largest observed score tau with at least tpr of machine scores >= tau;
 * the result is the fraction of human scores >= tau. The swapped orientation
 * (positive class = human) is reported alongside, since the two appear
 * interchangeably in the literature.
 */

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "detectorbench/corpus.hpp"
#include "detectorbench/detectors.hpp"

namespace detectorbench {

double auroc(std::span<const double> machine_scores, std::span<const double> human_scores);

double fpr_at_tpr(std::span<const double> machine_scores,
                  std::span<const double> human_scores, double tpr = 0.95);

struct EvaluationReport {
  std::string detector_config_hash;
  std::vector<std::string> human_topics;
  std::vector<std::string> machine_topics;
  int n_human = 0;
  int n_machine = 0;
  double auroc = 0.0;
  double fpr95 = 0.0;          // positive class = machine
  double fpr95_swapped = 0.0;  // positive class = human
  std::uint64_t seed = 0;
};

void to_json(nlohmann::json& j, const EvaluationReport& r);

/// Balanced evaluation: the larger class is subsampled to the smaller
/// class's size (Fisher-Yates prefix with a SplitMix64 stream derived from
/// `seed`), every document is scored, and AUROC / FPR95 are computed.
/// A document that fails to score aborts the evaluation with its id.
EvaluationReport evaluate_pairing(const DetectorRunner& runner,
                                  std::span<const Document> human_docs,
                                  std::span<const Document> machine_docs,
                                  std::uint64_t seed, int jobs = 1);

struct TransferMatrix {
  std::vector<std::string> topics;                 // row = human topic, col = machine topic
  std::vector<std::vector<EvaluationReport>> cells;
};

/// Cell (A, B) pairs human documents of topic A against machine documents of
/// topic B; the diagonal is the in-topic baseline. docs_per_cell > 0 caps
/// each side before balancing. Cell seeds derive from (seed, row, col), so
/// results do not depend on evaluation order.
TransferMatrix transfer_matrix(const DetectorRunner& runner,
                               std::span<const Document> documents,
                               const std::vector<std::string>& topics, int docs_per_cell,
                               std::uint64_t seed, int jobs = 1);

/// Pools human documents over `human_topics` and machine documents over
/// `machine_topics` with equal per-topic quotas (the smallest class size
/// across the named topics, optionally capped), then runs evaluate_pairing.
EvaluationReport mixture_eval(const DetectorRunner& runner,
                              std::span<const Document> documents,
                              const std::vector<std::string>& human_topics,
                              const std::vector<std::string>& machine_topics,
                              int per_topic_quota, std::uint64_t seed, int jobs = 1);

// --- score distributions -----------------------------------------------------

struct HistogramExport {
  std::string metric;
  std::string class_label;
  std::string topic;
  std::vector<double> edges;  // strictly increasing, uniform width
  std::vector<std::int64_t> counts;
};

struct ClassSummary {
  std::string class_label;
  int n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
};

struct ScoreDistribution {
  std::vector<HistogramExport> histograms;  // one per class, shared edges
  std::vector<ClassSummary> summaries;
  bool degenerate = false;  // all scores identical; single bin emitted
};

void to_json(nlohmann::json& j, const HistogramExport& h);
void to_json(nlohmann::json& j, const ScoreDistribution& d);

/// Shared uniform bin edges spanning min..max of the union of all classes;
/// the last bin is closed. bins >= 2. If every score is identical, emits a
/// single unit-width bin around the value and sets `degenerate`.
ScoreDistribution export_score_distribution(
    const std::map<std::string, std::vector<double>>& scores_by_class, int bins,
    const std::string& metric = "", const std::string& topic = "");

/// Seeded Fisher-Yates prefix subsample, order-stable (selected elements
/// keep their relative input order). Exposed for reuse by the CLI.
std::vector<std::size_t> subsample_indices(std::size_t population, std::size_t sample,
                                           std::uint64_t seed);

}  // namespace detectorbench
