// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace detectorbench {

inline constexpr std::string_view kUnkToken = "<unk>";
inline constexpr std::string_view kBosToken = "<s>";

/// Dense token-id space. Ids run 0..size()-1; the unknown-token id and the
/// begin-of-sequence id are always valid. BOS only ever appears as left
/// context padding, never in encoded text.
class Vocabulary {
 public:
  /// Throws std::invalid_argument on duplicate tokens or out-of-range ids.
  Vocabulary(std::vector<std::string> tokens, std::int32_t unk_id, std::int32_t bos_id);

  /// Builds a vocabulary from tokenized text: <unk> at id 0, <s> at id 1,
  /// then corpus words in first-appearance order.
  static Vocabulary build(std::span<const std::vector<std::string>> corpus_words);

  std::int32_t size() const { return static_cast<std::int32_t>(tokens_.size()); }
  std::int32_t unk_id() const { return unk_id_; }
  std::int32_t bos_id() const { return bos_id_; }

  /// Unknown words map to unk_id.
  std::int32_t id_of(std::string_view token) const;
  const std::string& token(std::int32_t id) const;

  std::vector<std::int32_t> encode(std::span<const std::string> words) const;
  std::vector<std::string> decode(std::span<const std::int32_t> ids) const;

  /// encode(split_words(text)).
  std::vector<std::int32_t> encode_text(std::string_view text) const;

  bool operator==(const Vocabulary& other) const;

  nlohmann::json to_json() const;
  static Vocabulary from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string_view, std::int32_t> index_;
  std::int32_t unk_id_;
  std::int32_t bos_id_;

  void rebuild_index();
};

}  // namespace detectorbench
