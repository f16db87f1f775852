// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#include "detectorbench/scoring.hpp"

namespace detectorbench {

void to_json(nlohmann::json& j, const TokenScore& s) {
  j = nlohmann::json{{"position", s.position},
                     {"token_id", s.token_id},
                     {"log_prob", s.log_prob},
                     {"rank", s.rank},
                     {"entropy", s.entropy}};
}

void from_json(const nlohmann::json& j, TokenScore& s) {
  j.at("position").get_to(s.position);
  j.at("token_id").get_to(s.token_id);
  j.at("log_prob").get_to(s.log_prob);
  j.at("rank").get_to(s.rank);
  j.at("entropy").get_to(s.entropy);
}

void to_json(nlohmann::json& j, const SequenceScoring& s) {
  j = nlohmann::json{{"token_ids", s.token_ids},
                     {"token_texts", s.token_texts},
                     {"scores", s.scores}};
}

void from_json(const nlohmann::json& j, SequenceScoring& s) {
  j.at("token_ids").get_to(s.token_ids);
  j.at("token_texts").get_to(s.token_texts);
  j.at("scores").get_to(s.scores);
}

}  // namespace detectorbench
