// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#include "detectorbench/corpus.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "detectorbench/errors.hpp"
#include "detectorbench/ngram_backend.hpp"
#include "detectorbench/parallel.hpp"
#include "detectorbench/rng.hpp"
#include "detectorbench/tokenizer.hpp"

namespace detectorbench {

std::string_view to_string(Origin origin) {
  return origin == Origin::Human ? "human" : "machine";
}

Origin origin_from_string(std::string_view name) {
  if (name == "human") return Origin::Human;
  if (name == "machine") return Origin::Machine;
  throw std::invalid_argument("unknown origin: " + std::string(name));
}

void to_json(nlohmann::json& j, const GenerationProvenance& p) {
  j = nlohmann::json{{"backend_id", p.backend_id},
                     {"prompt_tokens", p.prompt_tokens},
                     {"max_tokens", p.max_tokens},
                     {"temperature", p.temperature},
                     {"seed", p.seed},
                     {"prompt_in_chars", p.prompt_in_chars}};
}

void from_json(const nlohmann::json& j, GenerationProvenance& p) {
  j.at("backend_id").get_to(p.backend_id);
  j.at("prompt_tokens").get_to(p.prompt_tokens);
  j.at("max_tokens").get_to(p.max_tokens);
  j.at("temperature").get_to(p.temperature);
  j.at("seed").get_to(p.seed);
  p.prompt_in_chars = j.value("prompt_in_chars", false);
}

void to_json(nlohmann::json& j, const Document& d) {
  j = nlohmann::json{{"id", d.id},
                     {"topic", d.topic},
                     {"origin", std::string(to_string(d.origin))},
                     {"text", d.text}};
  if (d.provenance) {
    j["provenance"] = *d.provenance;
  } else {
    j["provenance"] = nullptr;
  }
}

void from_json(const nlohmann::json& j, Document& d) {
  j.at("id").get_to(d.id);
  j.at("topic").get_to(d.topic);
  d.origin = origin_from_string(j.at("origin").get<std::string>());
  j.at("text").get_to(d.text);
  const auto& prov = j.at("provenance");
  if (prov.is_null()) {
    d.provenance.reset();
  } else {
    d.provenance = prov.get<GenerationProvenance>();
  }
}

void to_json(nlohmann::json& j, const DatasetManifest& m) {
  j = nlohmann::json{{"format_version", m.format_version}, {"counts", m.counts}};
}

void from_json(const nlohmann::json& j, DatasetManifest& m) {
  j.at("format_version").get_to(m.format_version);
  j.at("counts").get_to(m.counts);
}

DatasetManifest build_manifest(std::span<const Document> documents) {
  DatasetManifest manifest;
  for (const auto& doc : documents) {
    ++manifest.counts[doc.topic][std::string(to_string(doc.origin))];
  }
  return manifest;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& dataset_path) {
  std::filesystem::path p = dataset_path;
  p.replace_extension(".manifest.json");
  return p;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("dataset: cannot open " + path.string());

  Dataset dataset;
  std::unordered_map<std::string, int> first_line_of_id;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("dataset: parse error at line " + std::to_string(line_number) + ": " +
                      e.what());
    }
    Document doc;
    try {
      doc = j.get<Document>();
    } catch (const std::exception& e) {
      throw DataError("dataset: invalid document at line " + std::to_string(line_number) +
                      ": " + e.what());
    }
    if (doc.text.empty()) {
      throw DataError("dataset: empty text at line " + std::to_string(line_number) +
                      " (id " + doc.id + ")");
    }
    if (doc.id.empty()) {
      throw DataError("dataset: empty id at line " + std::to_string(line_number));
    }
    if (doc.origin == Origin::Machine && !doc.provenance) {
      throw DataError("dataset: machine document without provenance at line " +
                      std::to_string(line_number) + " (id " + doc.id + ")");
    }
    auto [it, inserted] = first_line_of_id.emplace(doc.id, line_number);
    if (!inserted) {
      throw DataError("dataset: duplicate id \"" + doc.id + "\" at lines " +
                      std::to_string(it->second) + " and " + std::to_string(line_number));
    }
    dataset.documents.push_back(std::move(doc));
  }
  if (dataset.documents.empty()) throw DataError("dataset: no documents in " + path.string());

  dataset.manifest = build_manifest(dataset.documents);

  const auto sidecar = manifest_path_for(path);
  if (std::filesystem::exists(sidecar)) {
    std::ifstream min(sidecar);
    nlohmann::json mj;
    try {
      min >> mj;
      const auto stored = mj.get<DatasetManifest>();
      if (stored.counts != dataset.manifest.counts) {
        throw DataError("dataset: sidecar manifest counts disagree with file contents: " +
                        sidecar.string());
      }
    } catch (const nlohmann::json::exception& e) {
      throw DataError("dataset: malformed manifest " + sidecar.string() + ": " + e.what());
    }
  }
  return dataset;
}

namespace {

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
    out << contents;
    if (!out) throw DataError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

void save_dataset(std::span<const Document> documents, const std::filesystem::path& path) {
  std::string body;
  for (const auto& doc : documents) {
    body += nlohmann::json(doc).dump();
    body += '\n';
  }
  atomic_write(path, body);
  atomic_write(manifest_path_for(path),
               nlohmann::json(build_manifest(documents)).dump(2) + "\n");
}

CounterpartResult build_counterparts(const ScoringBackend& backend,
                                     std::span<const Document> human_docs,
                                     int prompt_tokens, int max_tokens, double temperature,
                                     std::uint64_t seed, int jobs, bool prompt_in_chars) {
  if (prompt_tokens < 1) throw std::invalid_argument("counterparts: prompt_tokens must be >= 1");
  if (max_tokens < 1) throw std::invalid_argument("counterparts: max_tokens must be >= 1");
  if (temperature < 0.0) throw std::invalid_argument("counterparts: temperature must be >= 0");

  struct Slot {
    std::optional<Document> machine;
    std::optional<SkippedDocument> skipped;
  };
  std::vector<Slot> slots(human_docs.size());

  parallel_for(human_docs.size(), jobs, [&](std::size_t i) {
    const Document& human = human_docs[i];

    std::string prompt;
    int unit_count = 0;
    if (prompt_in_chars) {
      unit_count = static_cast<int>(human.text.size());
      if (unit_count >= prompt_tokens + kMinTokensBeyondPrompt) {
        prompt = human.text.substr(0, static_cast<std::size_t>(prompt_tokens));
      }
    } else {
      const auto words = split_words(human.text);
      unit_count = static_cast<int>(words.size());
      if (unit_count >= prompt_tokens + kMinTokensBeyondPrompt) {
        prompt = join_words(
            std::span(words.data(), static_cast<std::size_t>(prompt_tokens)));
      }
    }
    if (prompt.empty()) {
      slots[i].skipped = SkippedDocument{human.id, unit_count};
      return;
    }

    GenerationProvenance provenance;
    provenance.backend_id = backend.id();
    provenance.prompt_tokens = prompt_tokens;
    provenance.max_tokens = max_tokens;
    provenance.temperature = temperature;
    provenance.seed = derive_seed(seed, {fnv1a64(human.id)});
    provenance.prompt_in_chars = prompt_in_chars;

    const std::string continuation =
        backend.generate(prompt, max_tokens, temperature, provenance.seed);

    Document machine;
    machine.id = human.id + "-machine";
    machine.topic = human.topic;
    machine.origin = Origin::Machine;
    machine.text = prompt_in_chars ? prompt + continuation : prompt + " " + continuation;
    machine.provenance = provenance;
    slots[i].machine = std::move(machine);
  });

  CounterpartResult result;
  for (auto& slot : slots) {
    if (slot.machine) result.machine_documents.push_back(std::move(*slot.machine));
    if (slot.skipped) result.skipped.push_back(std::move(*slot.skipped));
  }
  if (result.machine_documents.empty()) {
    throw DataError("counterparts: every document was shorter than prompt + " +
                    std::to_string(kMinTokensBeyondPrompt) + " tokens");
  }
  return result;
}

std::string regenerate_counterpart(const ScoringBackend& backend, const Document& human,
                                   const GenerationProvenance& provenance) {
  if (provenance.backend_id != backend.id()) {
    throw ConfigurationError("regenerate: provenance references backend " +
                             provenance.backend_id + " but got " + backend.id());
  }
  std::string prompt;
  if (provenance.prompt_in_chars) {
    prompt = human.text.substr(0, static_cast<std::size_t>(provenance.prompt_tokens));
  } else {
    const auto words = split_words(human.text);
    prompt = join_words(
        std::span(words.data(), static_cast<std::size_t>(provenance.prompt_tokens)));
  }
  const std::string continuation = backend.generate(prompt, provenance.max_tokens,
                                                    provenance.temperature, provenance.seed);
  return provenance.prompt_in_chars ? prompt + continuation : prompt + " " + continuation;
}

SynthResult synth_topics(std::span<const SynthTopicSpec> topics, std::uint64_t master_seed,
                         const SynthOptions& options) {
  if (topics.empty()) throw std::invalid_argument("synth: at least one topic required");
  for (const auto& topic : topics) {
    if (topic.name.empty()) throw std::invalid_argument("synth: topic name required");
    if (topic.temperature < 0.0) throw std::invalid_argument("synth: temperature must be >= 0");
    if (topic.documents < 1) throw std::invalid_argument("synth: doc count must be >= 1");
    if (topic.tokens_per_document < options.prompt_tokens + kMinTokensBeyondPrompt) {
      throw std::invalid_argument("synth: tokens_per_document below prompt requirement for " +
                                  topic.name);
    }
  }

  // Shared evaluation model sees every topic's base corpus.
  std::string combined;
  for (const auto& topic : topics) {
    combined += topic.base_text;
    if (!combined.empty() && combined.back() != '\n') combined += '\n';
  }
  auto eval_model = std::make_shared<const NGramModel>(
      train_ngram_from_text(combined, options.order, options.delta));
  NGramBackend eval_backend(eval_model);

  SynthResult result;
  result.eval_model = eval_model;

  for (std::size_t topic_index = 0; topic_index < topics.size(); ++topic_index) {
    const auto& spec = topics[topic_index];
    const NGramModel private_model =
        train_ngram_from_text(spec.base_text, options.order, options.delta);

    std::vector<Document> humans;
    humans.reserve(static_cast<std::size_t>(spec.documents));
    for (int d = 0; d < spec.documents; ++d) {
      const auto ids = private_model.sample_sequence(
          spec.tokens_per_document, spec.temperature,
          derive_seed(master_seed, {topic_index, static_cast<std::uint64_t>(d)}));
      Document doc;
      char suffix[16];
      std::snprintf(suffix, sizeof suffix, "-h%03d", d);
      doc.id = spec.name + suffix;
      doc.topic = spec.name;
      doc.origin = Origin::Human;
      doc.text = join_words(private_model.vocabulary().decode(ids));
      humans.push_back(std::move(doc));
    }

    const int continuation_tokens = spec.tokens_per_document - options.prompt_tokens;
    auto counterparts = build_counterparts(
        eval_backend, humans, options.prompt_tokens, continuation_tokens,
        options.machine_temperature,
        derive_seed(master_seed, {options.eval_seed_salt, topic_index}));

    for (auto& doc : humans) result.dataset.documents.push_back(std::move(doc));
    for (auto& doc : counterparts.machine_documents) {
      result.dataset.documents.push_back(std::move(doc));
    }
  }

  result.dataset.manifest = build_manifest(result.dataset.documents);
  return result;
}

std::string synthetic_base_text(std::uint64_t seed, int sentences, int vocabulary_words) {
  if (sentences < 1 || vocabulary_words < 8) {
    throw std::invalid_argument("synthetic_base_text: need >= 1 sentence and >= 8 words");
  }
  SplitMix64 rng(derive_seed(seed, {0x62617365ull}));  // independent of doc sampling streams

  static constexpr const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m",
                                            "n", "p", "r", "s", "t", "v", "z"};
  static constexpr const char* kVowels[] = {"a", "e", "i", "o", "u"};

  // Unique 2-3 syllable words.
  std::vector<std::string> words;
  words.reserve(static_cast<std::size_t>(vocabulary_words));
  while (static_cast<int>(words.size()) < vocabulary_words) {
    std::string word;
    const int syllables = 2 + static_cast<int>(rng.next_below(2));
    for (int s = 0; s < syllables; ++s) {
      word += kOnsets[rng.next_below(std::size(kOnsets))];
      word += kVowels[rng.next_below(std::size(kVowels))];
    }
    if (std::find(words.begin(), words.end(), word) == words.end()) {
      words.push_back(std::move(word));
    }
  }

  // Hidden chain: each word prefers 5 successors with a skewed profile and
  // leaks to a uniform word 8% of the time. The skew keeps argmax sampling
  // well separated from temperature 1 sampling.
  static constexpr double kSuccessorWeights[] = {0.40, 0.24, 0.16, 0.12, 0.08};
  constexpr double kLeak = 0.08;
  const auto n = static_cast<std::size_t>(vocabulary_words);
  std::vector<std::array<std::size_t, 5>> successors(n);
  for (std::size_t w = 0; w < n; ++w) {
    for (auto& s : successors[w]) s = rng.next_below(n);
  }

  std::string text;
  std::size_t current = rng.next_below(n);
  for (int line = 0; line < sentences; ++line) {
    const int length = 8 + static_cast<int>(rng.next_below(9));  // 8..16 words
    for (int i = 0; i < length; ++i) {
      if (i > 0) text += ' ';
      text += words[current];
      if (rng.next_double() < kLeak) {
        current = rng.next_below(n);
        continue;
      }
      double u = rng.next_double();
      std::size_t pick = successors[current][4];
      for (std::size_t k = 0; k < 5; ++k) {
        if (u < kSuccessorWeights[k]) {
          pick = successors[current][k];
          break;
        }
        u -= kSuccessorWeights[k];
      }
      current = pick;
    }
    text += '\n';
  }
  return text;
}

}  // namespace detectorbench
