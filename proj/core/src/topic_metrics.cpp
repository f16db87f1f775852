// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#include "detectorbench/topic_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "detectorbench/errors.hpp"
#include "detectorbench/parallel.hpp"

namespace detectorbench {

std::string_view to_string(TopicEntropyMode mode) {
  return mode == TopicEntropyMode::Shannon ? "shannon" : "observed_nll";
}

TopicEntropyMode topic_entropy_mode_from_string(std::string_view name) {
  if (name == "shannon") return TopicEntropyMode::Shannon;
  if (name == "observed_nll") return TopicEntropyMode::ObservedNll;
  throw std::invalid_argument("unknown topic entropy mode: " + std::string(name));
}

void to_json(nlohmann::json& j, const TopicEntropyReport& r) {
  j = nlohmann::json{{"topic", r.topic},
                     {"mode", std::string(to_string(r.mode))},
                     {"value", r.value},
                     {"document_count", r.document_count},
                     {"token_count", r.token_count}};
}

TopicEntropyReport topic_entropy(const ScoringBackend& backend,
                                 std::span<const Document> documents,
                                 TopicEntropyMode mode, int jobs) {
  if (documents.empty()) throw std::invalid_argument("topic_entropy: empty dataset");
  for (const auto& doc : documents) {
    if (doc.origin != Origin::Human) {
      throw std::invalid_argument("topic_entropy: machine-origin document " + doc.id +
                                  " (topic entropy is defined over human text)");
    }
  }

  struct PerDoc {
    double sum = 0.0;
    std::int64_t tokens = 0;
  };
  std::vector<PerDoc> partial(documents.size());
  parallel_for(documents.size(), jobs, [&](std::size_t i) {
    const SequenceScoring scoring = backend.score_text(documents[i].text);
    PerDoc acc;
    for (const auto& s : scoring.scores) {
      acc.sum += mode == TopicEntropyMode::Shannon ? s.entropy : -s.log_prob;
    }
    acc.tokens = static_cast<std::int64_t>(scoring.size());
    partial[i] = acc;
  });

  double total = 0.0;
  std::int64_t tokens = 0;
  for (const auto& p : partial) {
    total += p.sum;
    tokens += p.tokens;
  }
  if (tokens == 0) throw ScoringError("topic_entropy: no scoreable tokens");

  std::set<std::string> topics;
  for (const auto& doc : documents) topics.insert(doc.topic);
  std::string name;
  for (const auto& t : topics) {
    if (!name.empty()) name += "+";
    name += t;
  }

  TopicEntropyReport report;
  report.topic = name;
  report.mode = mode;
  report.value = total / static_cast<double>(tokens);
  report.document_count = static_cast<int>(documents.size());
  report.token_count = tokens;
  return report;
}

namespace {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedCorrelationError("correlation: zero variance in one coordinate");
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

CorrelationResult entropy_performance_correlation(
    std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 3) throw std::invalid_argument("correlation: need at least 3 pairs");
  std::vector<double> x, y;
  x.reserve(pairs.size());
  y.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
      throw std::invalid_argument("correlation: non-finite input pair");
    }
    x.push_back(a);
    y.push_back(b);
  }
  CorrelationResult result;
  result.pearson = pearson(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  result.spearman = pearson(rx, ry);
  return result;
}

}  // namespace detectorbench
