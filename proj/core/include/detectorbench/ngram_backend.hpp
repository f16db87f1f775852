// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "detectorbench/ngram_model.hpp"
#include "detectorbench/scoring.hpp"

namespace detectorbench {

/// Scores each position of `tokens` against the model: log P(w_t|w_<t),
/// competition rank of w_t, entropy of the full distribution. Position 0 is
/// conditioned on BOS padding. Throws ScoringError on empty input.
SequenceScoring score_sequence(const NGramModel& model,
                               std::span<const std::int32_t> tokens);

/// ScoringBackend over a trained NGramModel. Immutable and safe to share
/// across worker threads.
class NGramBackend final : public ScoringBackend {
 public:
  explicit NGramBackend(NGramModel model);
  explicit NGramBackend(std::shared_ptr<const NGramModel> model);

  const NGramModel& model() const { return *model_; }
  std::shared_ptr<const NGramModel> model_ptr() const { return model_; }

  std::string id() const override { return id_; }
  SequenceScoring score_text(const std::string& text) const override;
  SequenceScoring score_tokens(std::span<const std::int32_t> tokens) const;
  std::string generate(const std::string& prompt_text, int max_tokens, double temperature,
                       std::uint64_t seed) const override;

 private:
  std::shared_ptr<const NGramModel> model_;
  std::string id_;  // "ngram:<order>:<content hash>"
};

/// Left-context span resampler over the same n-gram model (the builtin
/// DetectGPT perturbation path). Weaker than encoder-style mask filling:
/// replacements condition only on the tokens to the left.
class NGramPerturber final : public Perturber {
 public:
  explicit NGramPerturber(std::shared_ptr<const NGramModel> model);

  std::vector<std::string> perturb(const std::string& text, double mask_fraction,
                                   int span_length, int count,
                                   std::uint64_t seed) const override;

 private:
  std::shared_ptr<const NGramModel> model_;
};

}  // namespace detectorbench
