// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#include "detectorbench/ngram_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "detectorbench/errors.hpp"
#include "detectorbench/tokenizer.hpp"

namespace detectorbench {

namespace {
constexpr int kFormatVersion = 1;
}

std::string NGramModel::pack_context(std::span<const std::int32_t> context) const {
  const std::size_t width = static_cast<std::size_t>(order_ - 1);
  std::string key(width * sizeof(std::int32_t), '\0');
  for (std::size_t slot = 0; slot < width; ++slot) {
    // Rightmost slot holds the most recent token; missing history is BOS.
    const std::size_t back = width - slot;
    const std::int32_t id =
        back <= context.size() ? context[context.size() - back] : vocab_.bos_id();
    std::memcpy(key.data() + slot * sizeof(std::int32_t), &id, sizeof(std::int32_t));
  }
  return key;
}

std::vector<std::int32_t> NGramModel::unpack_context(std::string_view key) {
  std::vector<std::int32_t> ids(key.size() / sizeof(std::int32_t));
  std::memcpy(ids.data(), key.data(), key.size());
  return ids;
}

NGramModel NGramModel::train(std::span<const std::vector<std::int32_t>> corpus,
                             Vocabulary vocabulary, int order, double delta) {
  if (order < 1) throw std::invalid_argument("ngram: order must be >= 1");
  if (delta < 0.0) throw std::invalid_argument("ngram: delta must be >= 0");
  if (corpus.empty()) throw std::invalid_argument("ngram: empty training corpus");

  NGramModel model(std::move(vocabulary), order, delta);
  const std::int32_t vocab_size = model.vocab_.size();
  for (const auto& sequence : corpus) {
    for (std::size_t t = 0; t < sequence.size(); ++t) {
      const std::int32_t target = sequence[t];
      if (target < 0 || target >= vocab_size) {
        throw std::invalid_argument("ngram: token id out of vocabulary range");
      }
      auto& slot = model.contexts_[model.pack_context({sequence.data(), t})];
      ++slot.counts[target];
      ++slot.total;
    }
  }
  return model;
}

bool NGramModel::context_seen(std::span<const std::int32_t> context) const {
  return contexts_.contains(pack_context(context));
}

std::vector<double> NGramModel::next_distribution(
    std::span<const std::int32_t> context) const {
  const auto vocab_size = static_cast<std::size_t>(vocab_.size());
  auto it = contexts_.find(pack_context(context));
  if (it == contexts_.end()) {
    if (delta_ == 0.0) {
      throw ZeroMassContextError("ngram: zero-mass context (unseen context with delta = 0)");
    }
    return std::vector<double>(vocab_size, 1.0 / static_cast<double>(vocab_size));
  }
  const ContextCounts& cc = it->second;
  const double denom = static_cast<double>(cc.total) + delta_ * static_cast<double>(vocab_size);
  std::vector<double> probs(vocab_size, delta_ / denom);
  for (const auto& [token, count] : cc.counts) {
    probs[static_cast<std::size_t>(token)] =
        (static_cast<double>(count) + delta_) / denom;
  }
  return probs;
}

std::int32_t NGramModel::sample_next(std::span<const std::int32_t> context,
                                     double temperature, SplitMix64& rng) const {
  if (temperature < 0.0) throw std::invalid_argument("ngram: temperature must be >= 0");
  const std::vector<double> probs = next_distribution(context);
  const auto masked = [&](std::size_t i) {
    const auto id = static_cast<std::int32_t>(i);
    return id == vocab_.unk_id() || id == vocab_.bos_id();
  };

  if (temperature == 0.0) {
    std::int32_t best = -1;
    double best_p = -1.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (masked(i)) continue;
      if (probs[i] > best_p) {  // strict: ties keep the smaller id
        best_p = probs[i];
        best = static_cast<std::int32_t>(i);
      }
    }
    if (best < 0 || best_p <= 0.0) throw ScoringError("ngram: no sampleable tokens");
    return best;
  }

  // Temperature scaling p^(1/T), computed in log space for small T.
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (masked(i) || probs[i] <= 0.0) continue;
    max_log = std::max(max_log, std::log(probs[i]) / temperature);
  }
  if (!std::isfinite(max_log)) throw ScoringError("ngram: no sampleable tokens");

  std::vector<double> weights(probs.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (masked(i) || probs[i] <= 0.0) continue;
    weights[i] = std::exp(std::log(probs[i]) / temperature - max_log);
    total += weights[i];
  }

  const double u = rng.next_double() * total;
  double cumulative = 0.0;
  std::int32_t last_positive = -1;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    cumulative += weights[i];
    last_positive = static_cast<std::int32_t>(i);
    if (cumulative > u) return last_positive;
  }
  return last_positive;  // rounding edge: u landed on the total
}

std::vector<std::int32_t> NGramModel::sample_continuation(
    std::span<const std::int32_t> prompt, int max_tokens, double temperature,
    std::uint64_t seed) const {
  if (max_tokens < 1) throw std::invalid_argument("ngram: max_tokens must be >= 1");
  if (temperature < 0.0) throw std::invalid_argument("ngram: temperature must be >= 0");
  SplitMix64 rng(seed);
  std::vector<std::int32_t> window(prompt.begin(), prompt.end());
  std::vector<std::int32_t> continuation;
  continuation.reserve(static_cast<std::size_t>(max_tokens));
  for (int i = 0; i < max_tokens; ++i) {
    const std::int32_t token = sample_next(window, temperature, rng);
    window.push_back(token);
    continuation.push_back(token);
  }
  return continuation;
}

std::vector<std::int32_t> NGramModel::sample_sequence(int length, double temperature,
                                                      std::uint64_t seed) const {
  return sample_continuation({}, length, temperature, seed);
}

nlohmann::json NGramModel::to_json() const {
  // Canonical ordering: contexts sorted by id sequence, counts by token id.
  std::vector<std::vector<std::int32_t>> keys;
  keys.reserve(contexts_.size());
  for (const auto& [key, unused] : contexts_) keys.push_back(unpack_context(key));
  std::sort(keys.begin(), keys.end());

  nlohmann::json contexts = nlohmann::json::array();
  for (const auto& ids : keys) {
    const ContextCounts& cc =
        contexts_.at(pack_context({ids.data(), ids.size()}));
    nlohmann::json counts = nlohmann::json::array();
    for (const auto& [token, count] : cc.counts) {
      counts.push_back(nlohmann::json::array({token, count}));
    }
    contexts.push_back(nlohmann::json{{"context", ids}, {"counts", std::move(counts)}});
  }
  return nlohmann::json{{"format_version", kFormatVersion},
                        {"kind", "ngram"},
                        {"order", order_},
                        {"delta", delta_},
                        {"vocabulary", vocab_.to_json()},
                        {"contexts", std::move(contexts)}};
}

NGramModel NGramModel::from_json(const nlohmann::json& j) {
  if (j.value("format_version", -1) != kFormatVersion) {
    throw DataError("ngram: unsupported model format_version");
  }
  if (j.value("kind", "") != "ngram") throw DataError("ngram: not an ngram model file");
  NGramModel model(Vocabulary::from_json(j.at("vocabulary")), j.at("order").get<int>(),
                   j.at("delta").get<double>());
  if (model.order_ < 1) throw DataError("ngram: order must be >= 1");
  if (model.delta_ < 0.0) throw DataError("ngram: delta must be >= 0");
  for (const auto& entry : j.at("contexts")) {
    const auto ids = entry.at("context").get<std::vector<std::int32_t>>();
    if (ids.size() != static_cast<std::size_t>(model.order_ - 1)) {
      throw DataError("ngram: context width does not match order");
    }
    ContextCounts cc;
    for (const auto& pair : entry.at("counts")) {
      const auto token = pair.at(0).get<std::int32_t>();
      const auto count = pair.at(1).get<std::uint64_t>();
      if (token < 0 || token >= model.vocab_.size()) {
        throw DataError("ngram: count references token outside the vocabulary");
      }
      cc.counts[token] = count;
      cc.total += count;
    }
    model.contexts_.emplace(model.pack_context({ids.data(), ids.size()}), std::move(cc));
  }
  return model;
}

void NGramModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("ngram: cannot open " + path.string() + " for writing");
  out << to_json().dump() << '\n';
  if (!out) throw DataError("ngram: failed writing " + path.string());
}

NGramModel NGramModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("ngram: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("ngram: parse error in " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

bool NGramModel::operator==(const NGramModel& other) const {
  return order_ == other.order_ && delta_ == other.delta_ && vocab_ == other.vocab_ &&
         contexts_ == other.contexts_;
}

NGramModel train_ngram_from_text(const std::string& text, int order, double delta) {
  std::vector<std::vector<std::string>> lines;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    auto words = split_words(line);
    if (!words.empty()) lines.push_back(std::move(words));
  }
  if (lines.empty()) throw std::invalid_argument("ngram: empty training corpus");
  Vocabulary vocab = Vocabulary::build(lines);
  std::vector<std::vector<std::int32_t>> corpus;
  corpus.reserve(lines.size());
  for (const auto& words : lines) corpus.push_back(vocab.encode(words));
  return NGramModel::train(corpus, std::move(vocab), order, delta);
}

}  // namespace detectorbench
