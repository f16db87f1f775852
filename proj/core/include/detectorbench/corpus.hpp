// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#pragma once

/**
 * @file corpus.hpp
 * Dataset ingestion and construction.
 *
 * Datasets are JSON lines, one document per line:
 *   {"id": str, "topic": str, "origin": "human"|"machine",
 *    "text": str, "provenance": obj|null}
 * with a sidecar manifest (<stem>.manifest.json) carrying per-topic counts.
 */

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "detectorbench/ngram_model.hpp"
#include "detectorbench/scoring.hpp"

namespace detectorbench {

enum class Origin { Human, Machine };

std::string_view to_string(Origin origin);
Origin origin_from_string(std::string_view name);

struct GenerationProvenance {
  std::string backend_id;
  int prompt_tokens = 0;
  int max_tokens = 0;
  double temperature = 0.0;
  std::uint64_t seed = 0;
  bool prompt_in_chars = false;

  bool operator==(const GenerationProvenance&) const = default;
};

void to_json(nlohmann::json& j, const GenerationProvenance& p);
void from_json(const nlohmann::json& j, GenerationProvenance& p);

struct Document {
  std::string id;
  std::string topic;
  Origin origin = Origin::Human;
  std::string text;
  std::optional<GenerationProvenance> provenance;

  bool operator==(const Document&) const = default;
};

void to_json(nlohmann::json& j, const Document& d);
void from_json(const nlohmann::json& j, Document& d);

struct DatasetManifest {
  int format_version = 1;
  // topic -> origin name -> document count
  std::map<std::string, std::map<std::string, int>> counts;

  bool operator==(const DatasetManifest&) const = default;
};

void to_json(nlohmann::json& j, const DatasetManifest& m);
void from_json(const nlohmann::json& j, DatasetManifest& m);

struct Dataset {
  std::vector<Document> documents;
  DatasetManifest manifest;
};

DatasetManifest build_manifest(std::span<const Document> documents);

/// Strict JSONL loader: parse failures, missing fields, empty text and
/// duplicate ids are DataErrors citing the offending line numbers. If a
/// sidecar manifest exists, its counts are checked against the contents.
Dataset load_dataset(const std::filesystem::path& path);

/// Writes <path> (JSONL) and <path stem>.manifest.json via temp + rename.
void save_dataset(std::span<const Document> documents, const std::filesystem::path& path);

std::filesystem::path manifest_path_for(const std::filesystem::path& dataset_path);

// --- machine counterparts ------------------------------------------------------

struct SkippedDocument {
  std::string id;
  int token_count = 0;
};

struct CounterpartResult {
  std::vector<Document> machine_documents;
  std::vector<SkippedDocument> skipped;
};

inline constexpr int kDefaultPromptTokens = 30;
/// A counterpart must contain scoreable content past the prompt.
inline constexpr int kMinTokensBeyondPrompt = 5;

/// For every human document with at least prompt_tokens + 5 tokens, emits a
/// machine document: the first prompt_tokens tokens verbatim plus a sampled
/// continuation of max_tokens tokens. Shorter documents are skipped and
/// reported; if everything is skipped, throws DataError. Machine ids get a
/// "-machine" suffix; per-document seeds derive from (seed, fnv1a64(id)).
/// With prompt_in_chars, the prompt is the first prompt_tokens bytes instead.
CounterpartResult build_counterparts(const ScoringBackend& backend,
                                     std::span<const Document> human_docs,
                                     int prompt_tokens, int max_tokens, double temperature,
                                     std::uint64_t seed, int jobs = 1,
                                     bool prompt_in_chars = false);

/// Rebuilds one counterpart from its provenance; used to audit that stored
/// machine text is exactly reproducible.
std::string regenerate_counterpart(const ScoringBackend& backend, const Document& human,
                                   const GenerationProvenance& provenance);

// --- synthetic topics ----------------------------------------------------------

struct SynthTopicSpec {
  std::string name;
  std::string base_text;  // training corpus, one sequence per line
  double temperature = 1.0;
  int documents = 100;          // human docs; machine counterparts match
  int tokens_per_document = 120;
};

struct SynthOptions {
  int order = 2;
  double delta = 0.1;
  int prompt_tokens = kDefaultPromptTokens;
  double machine_temperature = 0.0;
  std::uint64_t eval_seed_salt = 0x6d61636831ull;  // keeps machine stream off the human one
};

struct SynthResult {
  Dataset dataset;
  std::shared_ptr<const NGramModel> eval_model;  // trained on all base texts
};

/// Per topic: trains a private n-gram model on the topic's base text, samples
/// "human" documents from it at the topic temperature, then builds machine
/// counterparts with the shared evaluation model (trained on the union of all
/// base texts). Byte-deterministic given master_seed.
SynthResult synth_topics(std::span<const SynthTopicSpec> topics, std::uint64_t master_seed,
                         const SynthOptions& options = {});

/// Deterministic pseudo-language corpus: a seeded vocabulary of syllabic
/// words and a hidden successor chain with a skewed preference profile, one
/// sentence per line. Scale defaults give a bigram model dense enough to
/// make temperature the only knob that matters.
std::string synthetic_base_text(std::uint64_t seed, int sentences = 1500,
                                int vocabulary_words = 60);

}  // namespace detectorbench
