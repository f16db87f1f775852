// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#include "detectorbench/ngram_backend.hpp"

#include <cmath>
#include <limits>

#include "detectorbench/detectors.hpp"
#include "detectorbench/errors.hpp"
#include "detectorbench/rng.hpp"
#include "detectorbench/tokenizer.hpp"

namespace detectorbench {

SequenceScoring score_sequence(const NGramModel& model,
                               std::span<const std::int32_t> tokens) {
  if (tokens.empty()) throw ScoringError("score_sequence: empty token sequence");

  SequenceScoring scoring;
  scoring.token_ids.assign(tokens.begin(), tokens.end());
  scoring.token_texts = model.vocabulary().decode(tokens);
  scoring.scores.reserve(tokens.size());

  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const std::vector<double> probs = model.next_distribution({tokens.data(), t});
    const auto actual = static_cast<std::size_t>(tokens[t]);
    const double p = probs[actual];

    std::int32_t greater = 0;
    double entropy = 0.0;
    for (double q : probs) {
      if (q > p) ++greater;
      if (q > 0.0) entropy -= q * std::log(q);
    }

    TokenScore score;
    score.position = static_cast<std::int32_t>(t);
    score.token_id = tokens[t];
    score.log_prob = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    score.rank = 1 + greater;
    score.entropy = entropy < 0.0 ? 0.0 : entropy;  // -0.0 guard
    scoring.scores.push_back(score);
  }
  return scoring;
}

NGramBackend::NGramBackend(NGramModel model)
    : NGramBackend(std::make_shared<const NGramModel>(std::move(model))) {}

NGramBackend::NGramBackend(std::shared_ptr<const NGramModel> model)
    : model_(std::move(model)) {
  id_ = "ngram:" + std::to_string(model_->order()) + ":" +
        to_hex(fnv1a64(model_->to_json().dump()));
}

SequenceScoring NGramBackend::score_text(const std::string& text) const {
  return score_tokens(model_->vocabulary().encode_text(text));
}

SequenceScoring NGramBackend::score_tokens(std::span<const std::int32_t> tokens) const {
  return score_sequence(*model_, tokens);
}

std::string NGramBackend::generate(const std::string& prompt_text, int max_tokens,
                                   double temperature, std::uint64_t seed) const {
  const auto prompt = model_->vocabulary().encode_text(prompt_text);
  const auto continuation =
      model_->sample_continuation(prompt, max_tokens, temperature, seed);
  return join_words(model_->vocabulary().decode(continuation));
}

NGramPerturber::NGramPerturber(std::shared_ptr<const NGramModel> model)
    : model_(std::move(model)) {}

std::vector<std::string> NGramPerturber::perturb(const std::string& text,
                                                 double mask_fraction, int span_length,
                                                 int count, std::uint64_t seed) const {
  if (count < 1) throw std::invalid_argument("perturb: count must be >= 1");
  const auto tokens = model_->vocabulary().encode_text(text);
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const auto perturbed =
        perturb_spans(*model_, tokens, mask_fraction, span_length,
                      derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    out.push_back(join_words(model_->vocabulary().decode(perturbed)));
  }
  return out;
}

}  // namespace detectorbench
