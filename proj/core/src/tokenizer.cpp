// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#include "detectorbench/tokenizer.hpp"

#include <cctype>

namespace detectorbench {

namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80;
}

bool is_space_byte(unsigned char c) { return std::isspace(c) != 0; }

char lower_byte(unsigned char c) {
  return static_cast<char>(c < 0x80 ? std::tolower(c) : c);
}

}  // namespace

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (unsigned char c : text) {
    if (is_word_byte(c)) {
      current.push_back(lower_byte(c));
      continue;
    }
    if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
    if (!is_space_byte(c)) {
      words.emplace_back(1, static_cast<char>(c));  // punctuation as its own token
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::string join_words(std::span<const std::string> words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += words[i];
  }
  return out;
}

}  // namespace detectorbench
