// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#include "detectorbench/eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "detectorbench/errors.hpp"
#include "detectorbench/parallel.hpp"
#include "detectorbench/rng.hpp"

namespace detectorbench {

double auroc(std::span<const double> machine_scores, std::span<const double> human_scores) {
  if (machine_scores.empty() || human_scores.empty()) {
    throw std::invalid_argument("auroc: both classes must be non-empty");
  }
  std::vector<double> machine(machine_scores.begin(), machine_scores.end());
  std::vector<double> human(human_scores.begin(), human_scores.end());
  std::sort(machine.begin(), machine.end());
  std::sort(human.begin(), human.end());

  // Twice the Mann-Whitney numerator, in exact integer arithmetic:
  // 2 per (m > h) pair, 1 per tie.
  std::uint64_t numerator2 = 0;
  std::size_t h_lt = 0;  // humans strictly below the current machine value
  std::size_t h_eq = 0;  // humans equal to it
  std::size_t i = 0;
  while (i < machine.size()) {
    const double value = machine[i];
    std::size_t j = i;
    while (j + 1 < machine.size() && machine[j + 1] == value) ++j;
    const std::uint64_t m_eq = j - i + 1;

    while (h_lt + h_eq < human.size() && human[h_lt + h_eq] < value) {
      // everything previously counted equal is now strictly below
      ++h_lt;
    }
    h_lt += h_eq;
    h_eq = 0;
    while (h_lt + h_eq < human.size() && human[h_lt + h_eq] == value) ++h_eq;

    numerator2 += m_eq * (2 * static_cast<std::uint64_t>(h_lt) +
                          static_cast<std::uint64_t>(h_eq));
    i = j + 1;
  }
  return static_cast<double>(numerator2) /
         (2.0 * static_cast<double>(machine.size()) * static_cast<double>(human.size()));
}

double fpr_at_tpr(std::span<const double> machine_scores,
                  std::span<const double> human_scores, double tpr) {
  if (machine_scores.empty() || human_scores.empty()) {
    throw std::invalid_argument("fpr_at_tpr: both classes must be non-empty");
  }
  if (!(tpr > 0.0 && tpr <= 1.0)) {
    throw std::invalid_argument("fpr_at_tpr: tpr must be in (0, 1]");
  }
  std::vector<double> machine(machine_scores.begin(), machine_scores.end());
  std::sort(machine.begin(), machine.end(), std::greater<>());

  // Thresholds are observed machine scores only; walk them descending and
  // stop at the largest tau whose machine recall reaches tpr. The epsilon
  // absorbs the inexactness of tpr itself (e.g. 0.95 * 20 vs 19).
  const double required = tpr * static_cast<double>(machine.size()) - 1e-9;
  double tau = machine.back();
  for (std::size_t i = 0; i < machine.size(); ++i) {
    if (i + 1 < machine.size() && machine[i + 1] == machine[i]) continue;
    if (static_cast<double>(i + 1) >= required) {
      tau = machine[i];
      break;
    }
  }

  std::size_t false_positives = 0;
  for (double h : human_scores) {
    if (h >= tau) ++false_positives;
  }
  return static_cast<double>(false_positives) / static_cast<double>(human_scores.size());
}

std::vector<std::size_t> subsample_indices(std::size_t population, std::size_t sample,
                                           std::uint64_t seed) {
  if (sample > population) throw std::invalid_argument("subsample: sample exceeds population");
  std::vector<std::size_t> indices(population);
  for (std::size_t i = 0; i < population; ++i) indices[i] = i;
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < sample; ++i) {
    const std::size_t j = i + rng.next_below(population - i);
    std::swap(indices[i], indices[j]);
  }
  indices.resize(sample);
  std::sort(indices.begin(), indices.end());
  return indices;
}

namespace {

std::vector<const Document*> subsample_docs(std::span<const Document> docs,
                                            std::size_t target, std::uint64_t seed) {
  std::vector<const Document*> out;
  if (docs.size() <= target) {
    out.reserve(docs.size());
    for (const auto& d : docs) out.push_back(&d);
    return out;
  }
  for (std::size_t i : subsample_indices(docs.size(), target, seed)) {
    out.push_back(&docs[i]);
  }
  return out;
}

std::vector<const Document*> subsample_ptrs(const std::vector<const Document*>& docs,
                                            std::size_t target, std::uint64_t seed) {
  if (docs.size() <= target) return docs;
  std::vector<const Document*> out;
  out.reserve(target);
  for (std::size_t i : subsample_indices(docs.size(), target, seed)) out.push_back(docs[i]);
  return out;
}

std::vector<double> score_all(const DetectorRunner& runner,
                              const std::vector<const Document*>& docs, int jobs) {
  std::vector<DocumentScore> scores(docs.size());
  parallel_for(docs.size(), jobs, [&](std::size_t i) {
    try {
      scores[i] = runner.score(docs[i]->id, docs[i]->text);
    } catch (const std::exception& e) {
      throw ScoringError("document " + docs[i]->id + ": " + e.what());
    }
  });
  // Reduce in document-id order regardless of scoring order.
  std::sort(scores.begin(), scores.end(),
            [](const DocumentScore& a, const DocumentScore& b) {
              return a.document_id < b.document_id;
            });
  std::vector<double> values;
  values.reserve(scores.size());
  for (const auto& s : scores) values.push_back(s.score);
  return values;
}

std::vector<std::string> sorted_topics(const std::vector<const Document*>& docs) {
  std::set<std::string> topics;
  for (const auto* d : docs) topics.insert(d->topic);
  return {topics.begin(), topics.end()};
}

std::vector<const Document*> filter_docs(std::span<const Document> documents,
                                         const std::string& topic, Origin origin) {
  std::vector<const Document*> out;
  for (const auto& d : documents) {
    if (d.origin == origin && d.topic == topic) out.push_back(&d);
  }
  return out;
}

std::vector<Document> deref(const std::vector<const Document*>& ptrs) {
  std::vector<Document> docs;
  docs.reserve(ptrs.size());
  for (const auto* p : ptrs) docs.push_back(*p);
  return docs;
}

}  // namespace

void to_json(nlohmann::json& j, const EvaluationReport& r) {
  j = nlohmann::json{{"config_hash", r.detector_config_hash},
                     {"human_topics", r.human_topics},
                     {"machine_topics", r.machine_topics},
                     {"n_human", r.n_human},
                     {"n_machine", r.n_machine},
                     {"auroc", r.auroc},
                     {"fpr95", r.fpr95},
                     {"fpr95_swapped", r.fpr95_swapped},
                     {"seed", r.seed}};
}

EvaluationReport evaluate_pairing(const DetectorRunner& runner,
                                  std::span<const Document> human_docs,
                                  std::span<const Document> machine_docs,
                                  std::uint64_t seed, int jobs) {
  if (human_docs.empty()) throw std::invalid_argument("evaluate: empty human class");
  if (machine_docs.empty()) throw std::invalid_argument("evaluate: empty machine class");

  const std::size_t target = std::min(human_docs.size(), machine_docs.size());
  const auto humans = subsample_docs(human_docs, target, derive_seed(seed, {0}));
  const auto machines = subsample_docs(machine_docs, target, derive_seed(seed, {1}));

  const auto human_scores = score_all(runner, humans, jobs);
  const auto machine_scores = score_all(runner, machines, jobs);

  EvaluationReport report;
  report.detector_config_hash = runner.config_hash();
  report.human_topics = sorted_topics(humans);
  report.machine_topics = sorted_topics(machines);
  report.n_human = static_cast<int>(humans.size());
  report.n_machine = static_cast<int>(machines.size());
  report.auroc = auroc(machine_scores, human_scores);
  report.fpr95 = fpr_at_tpr(machine_scores, human_scores);
  report.fpr95_swapped = fpr_at_tpr(human_scores, machine_scores);
  report.seed = seed;
  return report;
}

TransferMatrix transfer_matrix(const DetectorRunner& runner,
                               std::span<const Document> documents,
                               const std::vector<std::string>& topics, int docs_per_cell,
                               std::uint64_t seed, int jobs) {
  if (topics.empty()) throw std::invalid_argument("transfer: at least one topic required");

  TransferMatrix matrix;
  matrix.topics = topics;
  matrix.cells.resize(topics.size());

  for (std::size_t row = 0; row < topics.size(); ++row) {
    matrix.cells[row].reserve(topics.size());
    for (std::size_t col = 0; col < topics.size(); ++col) {
      auto humans = filter_docs(documents, topics[row], Origin::Human);
      auto machines = filter_docs(documents, topics[col], Origin::Machine);
      if (humans.empty()) {
        throw std::invalid_argument("transfer: topic " + topics[row] + " has no human docs");
      }
      if (machines.empty()) {
        throw std::invalid_argument("transfer: topic " + topics[col] + " has no machine docs");
      }
      const std::uint64_t cell_seed = derive_seed(seed, {row, col});
      if (docs_per_cell > 0) {
        const auto cap = static_cast<std::size_t>(docs_per_cell);
        humans = subsample_ptrs(humans, std::min(cap, humans.size()),
                                derive_seed(cell_seed, {2}));
        machines = subsample_ptrs(machines, std::min(cap, machines.size()),
                                  derive_seed(cell_seed, {3}));
      }
      const auto human_docs = deref(humans);
      const auto machine_docs = deref(machines);
      matrix.cells[row].push_back(
          evaluate_pairing(runner, human_docs, machine_docs, cell_seed, jobs));
    }
  }
  return matrix;
}

EvaluationReport mixture_eval(const DetectorRunner& runner,
                              std::span<const Document> documents,
                              const std::vector<std::string>& human_topics,
                              const std::vector<std::string>& machine_topics,
                              int per_topic_quota, std::uint64_t seed, int jobs) {
  if (human_topics.empty() || machine_topics.empty()) {
    throw std::invalid_argument("mixture: both topic sets must be non-empty");
  }

  const auto pool = [&](const std::vector<std::string>& topics, Origin origin,
                        std::uint64_t side_salt) {
    std::vector<std::vector<const Document*>> per_topic;
    std::size_t quota = per_topic_quota > 0
                            ? static_cast<std::size_t>(per_topic_quota)
                            : std::numeric_limits<std::size_t>::max();
    for (const auto& topic : topics) {
      auto docs = filter_docs(documents, topic, origin);
      if (docs.empty()) {
        throw std::invalid_argument("mixture: topic " + topic + " has no " +
                                    std::string(to_string(origin)) + " docs");
      }
      quota = std::min(quota, docs.size());
      per_topic.push_back(std::move(docs));
    }
    std::vector<Document> out;
    for (std::size_t t = 0; t < per_topic.size(); ++t) {
      const auto picked = subsample_docs(deref_span(per_topic[t]), quota,
                                         derive_seed(seed, {side_salt, t}));
      for (const auto* d : picked) out.push_back(*d);
    }
    return out;
  };

  const auto human_pool = pool(human_topics, Origin::Human, 10);
  const auto machine_pool = pool(machine_topics, Origin::Machine, 11);
  return evaluate_pairing(runner, human_pool, machine_pool, derive_seed(seed, {12}), jobs);
}

void to_json(nlohmann::json& j, const HistogramExport& h) {
  j = nlohmann::json{{"metric", h.metric},
                     {"class", h.class_label},
                     {"topic", h.topic},
                     {"edges", h.edges},
                     {"counts", h.counts}};
}

void to_json(nlohmann::json& j, const ScoreDistribution& d) {
  nlohmann::json summaries = nlohmann::json::array();
  for (const auto& s : d.summaries) {
    summaries.push_back(nlohmann::json{
        {"class", s.class_label}, {"n", s.n}, {"mean", s.mean}, {"stddev", s.stddev}});
  }
  j = nlohmann::json{{"histograms", d.histograms},
                     {"summaries", std::move(summaries)},
                     {"degenerate", d.degenerate}};
}

ScoreDistribution export_score_distribution(
    const std::map<std::string, std::vector<double>>& scores_by_class, int bins,
    const std::string& metric, const std::string& topic) {
  if (bins < 2) throw std::invalid_argument("histogram: bins must be >= 2");
  if (scores_by_class.empty()) throw std::invalid_argument("histogram: no classes");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& [label, scores] : scores_by_class) {
    if (scores.empty()) throw std::invalid_argument("histogram: empty class " + label);
    for (double s : scores) {
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
  }

  ScoreDistribution dist;
  std::vector<double> edges;
  int effective_bins = bins;
  if (lo == hi) {
    // All scores identical: one unit-width bin around the value.
    dist.degenerate = true;
    effective_bins = 1;
    edges = {lo - 0.5, lo + 0.5};
  } else {
    edges.reserve(static_cast<std::size_t>(bins) + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (int b = 0; b <= bins; ++b) edges.push_back(lo + width * static_cast<double>(b));
    edges.back() = hi;  // guard against accumulated rounding
  }

  for (const auto& [label, scores] : scores_by_class) {
    HistogramExport h;
    h.metric = metric;
    h.class_label = label;
    h.topic = topic;
    h.edges = edges;
    h.counts.assign(static_cast<std::size_t>(effective_bins), 0);
    for (double s : scores) {
      std::size_t bin;
      if (dist.degenerate) {
        bin = 0;
      } else {
        const double width = (hi - lo) / static_cast<double>(effective_bins);
        bin = s >= hi ? static_cast<std::size_t>(effective_bins - 1)
                      : static_cast<std::size_t>((s - lo) / width);
        bin = std::min(bin, static_cast<std::size_t>(effective_bins - 1));
      }
      ++h.counts[bin];
    }
    dist.histograms.push_back(std::move(h));

    ClassSummary summary;
    summary.class_label = label;
    summary.n = static_cast<int>(scores.size());
    double mean = 0.0;
    for (double s : scores) mean += s;
    mean /= static_cast<double>(scores.size());
    double var = 0.0;
    for (double s : scores) var += (s - mean) * (s - mean);
    var /= static_cast<double>(scores.size());
    summary.mean = mean;
    summary.stddev = std::sqrt(var);
    dist.summaries.push_back(summary);
  }
  return dist;
}

}  // namespace detectorbench
