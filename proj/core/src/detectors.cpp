// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#include "detectorbench/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "detectorbench/errors.hpp"
#include "detectorbench/rng.hpp"

namespace detectorbench {

std::string_view to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::LogP: return "logp";
    case DetectorKind::Rank: return "rank";
    case DetectorKind::LogRank: return "logrank";
    case DetectorKind::Entropy: return "entropy";
    case DetectorKind::DetectGpt: return "detectgpt";
  }
  return "unknown";
}

DetectorKind detector_kind_from_string(std::string_view name) {
  if (name == "logp") return DetectorKind::LogP;
  if (name == "rank") return DetectorKind::Rank;
  if (name == "logrank") return DetectorKind::LogRank;
  if (name == "entropy") return DetectorKind::Entropy;
  if (name == "detectgpt") return DetectorKind::DetectGpt;
  throw std::invalid_argument("unknown detector: " + std::string(name));
}

void DetectorConfig::validate() const {
  if (kind == DetectorKind::DetectGpt) {
    if (perturbations < 1) throw std::invalid_argument("detectgpt: perturbations must be >= 1");
    if (!(mask_fraction > 0.0 && mask_fraction < 1.0)) {
      throw std::invalid_argument("detectgpt: mask_fraction must be in (0, 1)");
    }
    if (span_length < 1) throw std::invalid_argument("detectgpt: span_length must be >= 1");
  }
}

nlohmann::json DetectorConfig::to_json() const {
  nlohmann::json j{{"kind", std::string(to_string(kind))}, {"flip", flip}};
  if (kind == DetectorKind::DetectGpt) {
    j["perturbations"] = perturbations;
    j["mask_fraction"] = mask_fraction;
    j["span_length"] = span_length;
    j["normalize"] = normalize;
    j["seed"] = seed;
  }
  return j;
}

namespace {

void require_non_empty(const SequenceScoring& scoring) {
  if (scoring.scores.empty()) throw ScoringError("detector: empty scoring");
}

double mean_logp(const SequenceScoring& scoring) {
  double sum = 0.0;
  for (const auto& s : scoring.scores) sum += s.log_prob;
  return sum / static_cast<double>(scoring.scores.size());
}

}  // namespace

double logp_statistic(const SequenceScoring& scoring) {
  require_non_empty(scoring);
  return mean_logp(scoring);
}

double rank_statistic(const SequenceScoring& scoring) {
  require_non_empty(scoring);
  double sum = 0.0;
  for (const auto& s : scoring.scores) sum += static_cast<double>(s.rank);
  return -sum / static_cast<double>(scoring.scores.size());
}

double logrank_statistic(const SequenceScoring& scoring) {
  require_non_empty(scoring);
  double sum = 0.0;
  for (const auto& s : scoring.scores) sum += std::log(static_cast<double>(s.rank));
  return -sum / static_cast<double>(scoring.scores.size());
}

double entropy_statistic(const SequenceScoring& scoring) {
  require_non_empty(scoring);
  double sum = 0.0;
  for (const auto& s : scoring.scores) sum += s.entropy;
  return sum / static_cast<double>(scoring.scores.size());
}

std::vector<std::int32_t> perturb_spans(const NGramModel& model,
                                        std::span<const std::int32_t> tokens,
                                        double mask_fraction, int span_length,
                                        std::uint64_t seed) {
  if (!(mask_fraction > 0.0 && mask_fraction < 1.0)) {
    throw std::invalid_argument("perturb_spans: mask_fraction must be in (0, 1)");
  }
  if (span_length < 1) throw std::invalid_argument("perturb_spans: span_length must be >= 1");
  const auto n = tokens.size();
  const auto span = static_cast<std::size_t>(span_length);
  if (n < span) throw std::invalid_argument("perturb_spans: document shorter than one span");

  const auto requested = static_cast<std::size_t>(std::max<long long>(
      1, std::llround(mask_fraction * static_cast<double>(n) / static_cast<double>(span))));

  SplitMix64 rng(seed);

  // Draw non-overlapping span starts; never more than actually fit.
  std::vector<std::size_t> available;
  available.reserve(n - span + 1);
  for (std::size_t s = 0; s + span <= n; ++s) available.push_back(s);
  std::vector<std::size_t> starts;
  while (starts.size() < requested && !available.empty()) {
    const std::size_t pick = available[rng.next_below(available.size())];
    starts.push_back(pick);
    std::erase_if(available, [&](std::size_t s) { return s + span > pick && s < pick + span; });
  }
  std::sort(starts.begin(), starts.end());

  // Resample left to right so later spans condition on earlier replacements.
  std::vector<std::int32_t> result(tokens.begin(), tokens.end());
  for (const std::size_t start : starts) {
    for (std::size_t offset = 0; offset < span; ++offset) {
      const std::size_t pos = start + offset;
      result[pos] = model.sample_next({result.data(), pos}, 1.0, rng);
    }
  }
  return result;
}

DetectGptResult detectgpt_statistic(const ScoringBackend& backend,
                                    const Perturber& perturber, const std::string& text,
                                    const DetectorConfig& config,
                                    std::string_view document_id) {
  if (config.perturbations < 1) {
    throw std::invalid_argument("detectgpt: perturbations must be >= 1");
  }
  config.validate();

  const SequenceScoring original_scoring = backend.score_text(text);
  const double original = mean_logp(original_scoring);
  const std::uint64_t doc_seed = derive_seed(config.seed, {fnv1a64(document_id)});
  const auto perturbed_texts = perturber.perturb(text, config.mask_fraction,
                                                 config.span_length, config.perturbations,
                                                 doc_seed);
  if (perturbed_texts.size() != static_cast<std::size_t>(config.perturbations)) {
    throw ScoringError("detectgpt: perturber returned wrong count");
  }

  DetectGptResult result;
  result.tokens_used = static_cast<int>(original_scoring.size());
  std::vector<double> means;
  means.reserve(perturbed_texts.size());
  for (const auto& variant : perturbed_texts) {
    if (variant == text) ++result.identical_perturbations;
    means.push_back(mean_logp(backend.score_text(variant)));
  }
  if (result.identical_perturbations == config.perturbations) {
    result.all_identical = true;
    return result;  // score 0; nothing to measure
  }

  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= static_cast<double>(means.size());
  result.raw_discrepancy = original - mean;

  if (config.normalize) {
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= static_cast<double>(means.size());  // population variance
    result.score = result.raw_discrepancy / (std::sqrt(var) + 1e-6);
  } else {
    result.score = result.raw_discrepancy;
  }
  return result;
}

void to_json(nlohmann::json& j, const DocumentScore& s) {
  j = nlohmann::json{{"id", s.document_id},
                     {"detector", std::string(to_string(s.kind))},
                     {"score", s.score},
                     {"tokens_used", s.tokens_used}};
}

void from_json(const nlohmann::json& j, DocumentScore& s) {
  j.at("id").get_to(s.document_id);
  s.kind = detector_kind_from_string(j.at("detector").get<std::string>());
  j.at("score").get_to(s.score);
  j.at("tokens_used").get_to(s.tokens_used);
}

DetectorRunner::DetectorRunner(std::shared_ptr<const ScoringBackend> backend,
                               std::shared_ptr<const Perturber> perturber,
                               DetectorConfig config)
    : backend_(std::move(backend)), perturber_(std::move(perturber)),
      config_(config) {
  if (!backend_) throw std::invalid_argument("detector: backend required");
  config_.validate();
  if (config_.kind == DetectorKind::DetectGpt && !perturber_) {
    throw std::invalid_argument("detectgpt: perturber required");
  }
  nlohmann::json fingerprint = config_.to_json();
  fingerprint["backend"] = backend_->id();
  config_hash_ = to_hex(fnv1a64(fingerprint.dump()));
}

DocumentScore DetectorRunner::score(std::string_view document_id,
                                    const std::string& text) const {
  DocumentScore out;
  out.document_id = std::string(document_id);
  out.kind = config_.kind;

  if (config_.kind == DetectorKind::DetectGpt) {
    const auto result = detectgpt_statistic(*backend_, *perturber_, text, config_, document_id);
    out.score = result.score;
    out.tokens_used = result.tokens_used;
  } else {
    const SequenceScoring scoring = backend_->score_text(text);
    switch (config_.kind) {
      case DetectorKind::LogP: out.score = logp_statistic(scoring); break;
      case DetectorKind::Rank: out.score = rank_statistic(scoring); break;
      case DetectorKind::LogRank: out.score = logrank_statistic(scoring); break;
      case DetectorKind::Entropy: out.score = entropy_statistic(scoring); break;
      case DetectorKind::DetectGpt: break;  // handled above
    }
    out.tokens_used = static_cast<int>(scoring.size());
  }

  if (config_.flip) out.score = -out.score;
  if (!std::isfinite(out.score)) {
    throw ScoringError("detector: non-finite score for document " + out.document_id);
  }
  return out;
}

}  // namespace detectorbench
