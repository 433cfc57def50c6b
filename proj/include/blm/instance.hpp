#pragma once

// BLM instances: seven context sentences in template order plus five
// shuffled answer candidates, one per label. Assembly samples from
// per-structure pools; dataset building adds distinctness and a leakage-free
// train/test split.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "blm/error.hpp"
#include "blm/record.hpp"
#include "blm/rng.hpp"
#include "blm/structure.hpp"

namespace blm {

inline constexpr std::string_view kDatasetVersion = "blm-v1";

class PoolExhausted : public Error {
 public:
  PoolExhausted(const std::string& what, std::optional<StructureType> st)
      : Error("pool-exhausted", what), structure_(st) {}

  // Missing structure, or nullopt when any question pool would have done.
  std::optional<StructureType> structure() const { return structure_; }

 private:
  std::optional<StructureType> structure_;
};

struct AnswerCandidate {
  SentenceRecord record;
  AnswerLabel label = AnswerLabel::Correct;

  friend bool operator==(const AnswerCandidate&, const AnswerCandidate&) = default;
};

struct BLMInstance {
  std::string instance_id;
  std::array<SentenceRecord, 7> context;
  std::array<AnswerCandidate, 5> answers;
  int correct_index = 0;

  Language language() const { return context[0].language; }

  friend bool operator==(const BLMInstance&, const BLMInstance&) = default;
};

struct Dataset {
  std::vector<BLMInstance> train;
  std::vector<BLMInstance> test;
};

// Every violated invariant, as a human-readable message. Empty when valid.
inline std::vector<std::string> validate_instance(const BLMInstance& inst) {
  std::vector<std::string> errs;
  for (std::size_t i = 0; i < 7; ++i) {
    if (inst.context[i].structure != kContextRows[i]) {
      errs.push_back("context row " + std::to_string(i + 1) + " has structure " +
                     to_string(inst.context[i].structure) + ", expected " + to_string(kContextRows[i]));
    }
  }
  std::array<int, 5> per_label{};
  for (const auto& a : inst.answers) {
    ++per_label[static_cast<std::size_t>(a.label)];
    if (label_for(a.record.structure) != a.label) {
      errs.push_back("answer '" + a.record.text + "' labelled " + to_string(a.label) +
                     " but has structure " + to_string(a.record.structure));
    }
  }
  for (std::size_t l = 0; l < per_label.size(); ++l) {
    if (per_label[l] != 1) {
      errs.push_back("label " + to_string(static_cast<AnswerLabel>(l)) + " occurs " +
                     std::to_string(per_label[l]) + " times");
    }
  }
  if (inst.correct_index < 0 || inst.correct_index > 4) {
    errs.push_back("correct_index out of range");
  } else if (inst.answers[static_cast<std::size_t>(inst.correct_index)].label != AnswerLabel::Correct) {
    errs.push_back("correct_index does not point at the Correct candidate");
  }
  std::set<std::string> texts;
  for (const auto& r : inst.context) texts.insert(r.text);
  for (const auto& a : inst.answers) texts.insert(a.record.text);
  if (texts.size() != 12) {
    errs.push_back("instance repeats a sentence (" + std::to_string(texts.size()) + " distinct of 12)");
  }
  return errs;
}

namespace instance_detail {

class Sampler {
 public:
  Sampler(const Pools& pools, Rng& rng) : pools_(pools), rng_(rng) {}

  bool available(const StructureType& st) const {
    auto it = pools_.find(st);
    if (it == pools_.end()) return false;
    for (const auto& r : it->second) {
      if (!used(r.text)) return true;
    }
    return false;
  }

  const SentenceRecord& draw(const StructureType& st) {
    auto it = pools_.find(st);
    if (it == pools_.end() || it->second.empty()) {
      throw PoolExhausted("pool " + to_string(st) + " is empty", st);
    }
    const auto& pool = it->second;
    // Rejection first; pools are usually much larger than one instance.
    for (int tries = 0; tries < 16; ++tries) {
      const auto& r = pool[uniform_index(rng_, pool.size())];
      if (!used(r.text)) return take(r);
    }
    std::vector<const SentenceRecord*> eligible;
    for (const auto& r : pool) {
      if (!used(r.text)) eligible.push_back(&r);
    }
    if (eligible.empty()) {
      throw PoolExhausted("pool " + to_string(st) + " has no sentence left for this instance", st);
    }
    return take(*eligible[uniform_index(rng_, eligible.size())]);
  }

 private:
  bool used(const std::string& text) const {
    return std::find(used_.begin(), used_.end(), text) != used_.end();
  }

  const SentenceRecord& take(const SentenceRecord& r) {
    used_.push_back(r.text);
    return r;
  }

  const Pools& pools_;
  Rng& rng_;
  std::vector<std::string> used_;
};

inline std::string instance_key(const BLMInstance& inst) {
  std::vector<std::string> texts;
  for (const auto& r : inst.context) texts.push_back(r.text);
  for (const auto& a : inst.answers) texts.push_back(a.record.text);
  std::sort(texts.begin(), texts.end());
  std::string key;
  for (const auto& t : texts) {
    key += t;
    key += '\x1f';
  }
  return key;
}

}  // namespace instance_detail

inline BLMInstance assemble_instance(const Pools& pools, Rng& rng) {
  instance_detail::Sampler sampler(pools, rng);
  BLMInstance inst;
  for (std::size_t i = 0; i < 7; ++i) inst.context[i] = sampler.draw(kContextRows[i]);

  std::array<AnswerCandidate, 5> answers;
  answers[0] = {sampler.draw(kPassOneD), AnswerLabel::Correct};
  answers[1] = {sampler.draw(kPassTwoD), AnswerLabel::ErrNumArgs};
  answers[2] = {sampler.draw(kActOneD), AnswerLabel::ErrVoice};
  answers[3] = {sampler.draw(kActTwoD), AnswerLabel::ErrVoiceAndArgs};

  std::vector<StructureType> questions;
  for (const auto& q : kQuestionStructures) {
    if (sampler.available(q)) questions.push_back(q);
  }
  if (questions.empty()) {
    throw PoolExhausted("no question pool has a sentence left for the sentence-type distractor",
                        std::nullopt);
  }
  answers[4] = {sampler.draw(questions[uniform_index(rng, questions.size())]),
                AnswerLabel::ErrSentenceType};

  shuffle(std::span<AnswerCandidate>(answers), rng);
  inst.answers = std::move(answers);
  for (std::size_t i = 0; i < 5; ++i) {
    if (inst.answers[i].label == AnswerLabel::Correct) inst.correct_index = static_cast<int>(i);
  }
  return inst;
}

// Splits every pool's distinct texts between train and test. A text keeps
// the side it was first given, so no sentence lands on both sides.
inline std::pair<Pools, Pools> partition_pools(const Pools& pools, double split, Rng& rng) {
  Pools train, test;
  std::map<std::string, bool> side;  // true = train
  for (const auto& st : kAllStructures) {
    auto it = pools.find(st);
    if (it == pools.end()) continue;
    std::vector<const SentenceRecord*> items;
    std::unordered_set<std::string> seen;
    for (const auto& r : it->second) {
      if (seen.insert(r.text).second) items.push_back(&r);
    }
    shuffle(std::span<const SentenceRecord*>(items), rng);
    const auto k = static_cast<long>(items.size());
    long want_train = std::lround(split * static_cast<double>(k));
    if (k >= 2) want_train = std::clamp(want_train, 1L, k - 1);
    long n_train = 0;
    for (const auto* r : items) {
      if (auto s = side.find(r->text); s != side.end() && s->second) ++n_train;
    }
    for (const auto* r : items) {
      auto s = side.find(r->text);
      bool to_train;
      if (s != side.end()) {
        to_train = s->second;
      } else {
        to_train = n_train < want_train;
        if (to_train) ++n_train;
        side.emplace(r->text, to_train);
      }
      (to_train ? train : test)[st].push_back(*r);
    }
  }
  return {std::move(train), std::move(test)};
}

struct BuildOptions {
  std::size_t n_instances = 2000;
  double split = 0.8;
  std::uint64_t seed = 0;
  bool strict = true;  // sentence-level train/test disjointness
  std::string id_prefix;
};

inline Dataset build_dataset(const Pools& pools, const BuildOptions& opt) {
  if (opt.n_instances < 1) throw InvalidArgument("n_instances must be >= 1");
  if (!(opt.split > 0.0 && opt.split < 1.0)) throw InvalidArgument("split must be in (0, 1)");
  const auto n_train = static_cast<std::size_t>(std::lround(opt.split * static_cast<double>(opt.n_instances)));
  const std::size_t n_test = opt.n_instances - n_train;

  std::string prefix = opt.id_prefix;
  if (prefix.empty()) {
    for (const auto& [st, pool] : pools) {
      if (!pool.empty()) {
        prefix = to_string(pool.front().language);
        break;
      }
    }
  }

  std::unordered_set<std::string> keys;
  auto generate = [&](const Pools& source, std::size_t count, Rng& rng, std::vector<BLMInstance>& out) {
    const std::size_t max_attempts = 100 * count + 10000;
    std::size_t attempts = 0;
    while (out.size() < count) {
      if (++attempts > max_attempts) {
        throw Error("capacity", "could only assemble " + std::to_string(out.size()) + " of " +
                                    std::to_string(count) + " distinct instances from the given pools");
      }
      BLMInstance inst = assemble_instance(source, rng);
      if (!keys.insert(instance_detail::instance_key(inst)).second) continue;
      out.push_back(std::move(inst));
    }
  };

  Dataset ds;
  if (opt.strict) {
    Rng part_rng(derive_seed(opt.seed, 0));
    auto [train_pools, test_pools] = partition_pools(pools, opt.split, part_rng);
    for (const auto& st : kAllStructures) {
      const bool train_empty = train_pools[st].empty();
      const bool test_empty = test_pools[st].empty();
      if ((n_train > 0 && train_empty) || (n_test > 0 && test_empty)) {
        throw PoolExhausted("strict split leaves pool " + to_string(st) + " empty on the " +
                                (train_empty ? "train" : "test") + " side",
                            st);
      }
    }
    Rng train_rng(derive_seed(opt.seed, 1));
    Rng test_rng(derive_seed(opt.seed, 2));
    generate(train_pools, n_train, train_rng, ds.train);
    generate(test_pools, n_test, test_rng, ds.test);
  } else {
    Rng rng(derive_seed(opt.seed, 3));
    std::vector<BLMInstance> all;
    generate(pools, opt.n_instances, rng, all);
    ds.train.assign(std::make_move_iterator(all.begin()),
                    std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(n_train)));
    ds.test.assign(std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(n_train)),
                   std::make_move_iterator(all.end()));
  }
  auto number = [&](std::vector<BLMInstance>& v, const char* split_name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%05zu", i + 1);
      v[i].instance_id = prefix + "-" + split_name + "-" + buf;
    }
  };
  number(ds.train, "train");
  number(ds.test, "test");
  return ds;
}

inline nlohmann::ordered_json instance_to_json(const BLMInstance& inst) {
  nlohmann::ordered_json j;
  j["version"] = kDatasetVersion;
  j["instance_id"] = inst.instance_id;
  j["language"] = to_string(inst.language());
  auto& ctx = j["context"] = nlohmann::ordered_json::array();
  for (const auto& r : inst.context) {
    nlohmann::ordered_json c;
    c["text"] = r.text;
    c["structure"] = to_string(r.structure);
    c["source"] = source_to_json(r.source);
    ctx.push_back(std::move(c));
  }
  auto& ans = j["answers"] = nlohmann::ordered_json::array();
  for (const auto& a : inst.answers) {
    nlohmann::ordered_json c;
    c["text"] = a.record.text;
    c["structure"] = to_string(a.record.structure);
    c["label"] = to_string(a.label);
    c["source"] = source_to_json(a.record.source);
    ans.push_back(std::move(c));
  }
  j["correct_index"] = inst.correct_index;
  return j;
}

template <typename Json>
BLMInstance instance_from_json(const Json& j) {
  if (j.value("version", std::string()) != kDatasetVersion) {
    throw FormatError("dataset line is not " + std::string(kDatasetVersion));
  }
  BLMInstance inst;
  inst.instance_id = j.at("instance_id").template get<std::string>();
  const Language lang = language_from_string(j.at("language").template get<std::string>());
  const auto& ctx = j.at("context");
  const auto& ans = j.at("answers");
  if (ctx.size() != 7 || ans.size() != 5) throw FormatError("instance " + inst.instance_id + " has wrong arity");
  for (std::size_t i = 0; i < 7; ++i) inst.context[i] = record_from_json(ctx[i], lang);
  for (std::size_t i = 0; i < 5; ++i) {
    inst.answers[i].record = record_from_json(ans[i], lang);
    inst.answers[i].label = label_from_string(ans[i].at("label").template get<std::string>());
  }
  inst.correct_index = j.at("correct_index").template get<int>();
  return inst;
}

inline void write_dataset(const std::filesystem::path& path, const std::vector<BLMInstance>& instances) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  for (const auto& inst : instances) out << instance_to_json(inst).dump() << '\n';
}

inline std::vector<BLMInstance> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
  std::vector<BLMInstance> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(instance_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace blm
