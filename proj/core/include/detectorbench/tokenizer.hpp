// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace detectorbench {

/// Lowercased word-level tokenization. A word is a maximal run of ASCII
/// alphanumerics (bytes >= 0x80 are treated as word characters so UTF-8
/// stays intact); every other non-whitespace byte becomes a single-character
/// token. "" yields no tokens.
std::vector<std::string> split_words(std::string_view text);

/// Inverse of split_words up to spacing: tokens joined by single spaces.
/// split_words(join_words(w)) == w for any split_words output.
std::string join_words(std::span<const std::string> words);

}  // namespace detectorbench
