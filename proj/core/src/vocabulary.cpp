// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#include "detectorbench/vocabulary.hpp"

#include <stdexcept>

#include "detectorbench/tokenizer.hpp"

namespace detectorbench {

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::int32_t unk_id,
                       std::int32_t bos_id)
    : tokens_(std::move(tokens)), unk_id_(unk_id), bos_id_(bos_id) {
  if (tokens_.empty()) throw std::invalid_argument("vocabulary: empty token list");
  const auto n = static_cast<std::int32_t>(tokens_.size());
  if (unk_id_ < 0 || unk_id_ >= n) throw std::invalid_argument("vocabulary: unk id out of range");
  if (bos_id_ < 0 || bos_id_ >= n) throw std::invalid_argument("vocabulary: bos id out of range");
  rebuild_index();
  if (static_cast<std::int32_t>(index_.size()) != n) {
    throw std::invalid_argument("vocabulary: duplicate token strings");
  }
}

void Vocabulary::rebuild_index() {
  index_.clear();
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    index_.emplace(tokens_[i], static_cast<std::int32_t>(i));
  }
}

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> corpus_words) {
  std::vector<std::string> tokens;
  tokens.emplace_back(kUnkToken);
  tokens.emplace_back(kBosToken);
  std::unordered_map<std::string_view, std::int32_t> seen;
  seen.emplace(kUnkToken, 0);
  seen.emplace(kBosToken, 1);
  for (const auto& sequence : corpus_words) {
    for (const auto& word : sequence) {
      if (seen.contains(word)) continue;
      tokens.push_back(word);
      seen.emplace(tokens.back(), static_cast<std::int32_t>(tokens.size() - 1));
    }
  }
  return Vocabulary(std::move(tokens), 0, 1);
}

std::int32_t Vocabulary::id_of(std::string_view token) const {
  auto it = index_.find(token);
  return it == index_.end() ? unk_id_ : it->second;
}

const std::string& Vocabulary::token(std::int32_t id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("vocabulary: token id out of range");
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<std::int32_t> Vocabulary::encode(std::span<const std::string> words) const {
  std::vector<std::int32_t> ids;
  ids.reserve(words.size());
  for (const auto& w : words) ids.push_back(id_of(w));
  return ids;
}

std::vector<std::string> Vocabulary::decode(std::span<const std::int32_t> ids) const {
  std::vector<std::string> words;
  words.reserve(ids.size());
  for (auto id : ids) words.push_back(token(id));
  return words;
}

std::vector<std::int32_t> Vocabulary::encode_text(std::string_view text) const {
  return encode(split_words(text));
}

bool Vocabulary::operator==(const Vocabulary& other) const {
  return tokens_ == other.tokens_ && unk_id_ == other.unk_id_ && bos_id_ == other.bos_id_;
}

nlohmann::json Vocabulary::to_json() const {
  return nlohmann::json{{"tokens", tokens_}, {"unk_id", unk_id_}, {"bos_id", bos_id_}};
}

Vocabulary Vocabulary::from_json(const nlohmann::json& j) {
  return Vocabulary(j.at("tokens").get<std::vector<std::string>>(),
                    j.at("unk_id").get<std::int32_t>(), j.at("bos_id").get<std::int32_t>());
}

}  // namespace detectorbench
