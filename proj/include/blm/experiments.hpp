#pragma once

// Train/test conditions over synthetic and natural data, scoring, error
// analysis and the aggregated significance test.

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blm/embeddings.hpp"
#include "blm/error.hpp"
#include "blm/instance.hpp"
#include "blm/probe.hpp"
#include "blm/stats.hpp"
#include "blm/structure.hpp"

namespace blm {

enum class DataSource : std::uint8_t { Syn, Nat };

inline std::string to_string(DataSource s) { return s == DataSource::Syn ? "Syn" : "Nat"; }

inline DataSource source_from_string(std::string_view s) {
  if (s == "Syn" || s == "syn" || s == "synthetic") return DataSource::Syn;
  if (s == "Nat" || s == "nat" || s == "natural") return DataSource::Nat;
  throw InvalidArgument("unknown data source '" + std::string(s) + "'");
}

struct Condition {
  DataSource train_source = DataSource::Syn;
  DataSource test_source = DataSource::Syn;
  Language language = Language::FR;
  std::string provider_id;

  std::string name() const { return to_string(train_source) + to_string(test_source); }

  friend bool operator==(const Condition&, const Condition&) = default;
};

// SynSyn, NatNat, SynNat, NatSyn.
inline constexpr std::array<std::pair<DataSource, DataSource>, 4> kConditionPairs{{
    {DataSource::Syn, DataSource::Syn},
    {DataSource::Nat, DataSource::Nat},
    {DataSource::Syn, DataSource::Nat},
    {DataSource::Nat, DataSource::Syn},
}};

inline Condition condition_from_name(std::string_view name, Language lang, std::string provider_id = {}) {
  if (name.size() != 6) throw InvalidArgument("bad condition name '" + std::string(name) + "'");
  return {source_from_string(name.substr(0, 3)), source_from_string(name.substr(3)), lang, std::move(provider_id)};
}

struct Prediction {
  std::string instance_id;
  int selected = 0;
  int correct = 0;
  AnswerLabel selected_label = AnswerLabel::Correct;

  bool is_correct() const { return selected == correct; }

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct EvaluationReport {
  Condition condition;
  double f1 = 0.0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::size_t n_test = 0;
  std::map<AnswerLabel, double> error_distribution;
  std::vector<Prediction> predictions;

  friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

// F1 of the correct-answer class. With one gold and one selection per
// instance, precision, recall and accuracy coincide, so this is accuracy.
inline double compute_f1(std::span<const int> predictions, std::span<const int> gold) {
  if (predictions.size() != gold.size()) throw InvalidArgument("predictions and gold differ in length");
  if (predictions.empty()) throw InvalidArgument("cannot score zero predictions");
  std::size_t tp = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) tp += predictions[i] == gold[i] ? 1 : 0;
  const double precision = static_cast<double>(tp) / static_cast<double>(predictions.size());
  const double recall = static_cast<double>(tp) / static_cast<double>(gold.size());
  return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

// Macro F1 over the two candidate classes (correct / distractor), treating
// each of the five candidates as one binary decision.
inline double macro_f1(std::span<const int> predictions, std::span<const int> gold, int n_candidates = 5) {
  if (predictions.size() != gold.size()) throw InvalidArgument("predictions and gold differ in length");
  if (predictions.empty()) throw InvalidArgument("cannot score zero predictions");
  std::array<double, 2> tp{}, fp{}, fn{};  // [0] correct class, [1] distractor class
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (int c = 0; c < n_candidates; ++c) {
      const int truth = c == gold[i] ? 0 : 1;
      const int guess = c == predictions[i] ? 0 : 1;
      if (truth == guess) {
        tp[static_cast<std::size_t>(truth)] += 1;
      } else {
        fp[static_cast<std::size_t>(guess)] += 1;
        fn[static_cast<std::size_t>(truth)] += 1;
      }
    }
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    const double denom = 2 * tp[k] + fp[k] + fn[k];
    sum += denom == 0.0 ? 0.0 : 2 * tp[k] / denom;
  }
  return sum / 2.0;
}

// Share of each error label among the wrong selections; empty if none.
inline std::map<AnswerLabel, double> error_analysis(std::span<const Prediction> predictions) {
  std::map<AnswerLabel, double> dist;
  std::size_t wrong = 0;
  for (const auto& p : predictions) {
    if (p.is_correct()) continue;
    dist[p.selected_label] += 1.0;
    ++wrong;
  }
  for (auto& [label, v] : dist) v /= static_cast<double>(wrong);
  return dist;
}

inline std::map<AnswerLabel, double> error_analysis(const EvaluationReport& r) {
  return error_analysis(r.predictions);
}

// Share of wrong selections that got the voice wrong (ErrVoice or
// ErrVoiceAndArgs).
inline double voice_error_mass(const std::map<AnswerLabel, double>& dist) {
  double s = 0.0;
  for (const auto& [label, v] : dist) {
    if (violates_voice(label)) s += v;
  }
  return s;
}

inline EvaluationReport score_predictions(const Condition& cond, std::span<const EmbeddedInstance> data,
                                          std::span<const std::string> ids, std::span<const int> selected) {
  if (data.size() != selected.size() || ids.size() != selected.size()) {
    throw InvalidArgument("predictions and test set differ in length");
  }
  EvaluationReport r;
  r.condition = cond;
  r.n_test = data.size();
  std::vector<int> gold;
  gold.reserve(data.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int sel = selected[i];
    gold.push_back(data[i].correct_index);
    r.predictions.push_back({ids[i], sel, data[i].correct_index, data[i].labels[static_cast<std::size_t>(sel)]});
    if (sel == data[i].correct_index) ++correct;
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.n_test);
  r.f1 = compute_f1(selected, gold);
  r.macro_f1 = macro_f1(selected, gold);
  r.error_distribution = error_analysis(r.predictions);
  return r;
}

inline EvaluationReport evaluate(const ProbeModel& model, const Condition& cond,
                                 std::span<const BLMInstance> test, const EmbeddingProvider& provider) {
  if (test.empty()) throw InvalidArgument("test set is empty");
  if (provider.dim() != model.dim) {
    throw InvalidArgument("provider dim " + std::to_string(provider.dim()) + " does not match probe dim " +
                          std::to_string(model.dim));
  }
  const auto data = embed_instances(test, provider);
  std::vector<std::string> ids;
  for (const auto& inst : test) ids.push_back(inst.instance_id);
  return score_predictions(cond, data, ids, predict_all(model, data));
}

inline ProbeModel train_on(std::span<const BLMInstance> train, const EmbeddingProvider& provider,
                           const ProbeHyper& hyper, TrainingLog* log = nullptr) {
  const auto data = embed_instances(train, provider);
  return train_probe(data, provider.dim(), hyper, log);
}

// Trains on the train split of the condition's train source and evaluates
// on the test split of its test source. The test provider may differ from
// the training one (e.g. noisier embeddings for the natural side).
inline EvaluationReport run_condition(const Condition& cond, std::span<const BLMInstance> train,
                                      std::span<const BLMInstance> test, const EmbeddingProvider& train_provider,
                                      const EmbeddingProvider& test_provider, const ProbeHyper& hyper,
                                      TrainingLog* log = nullptr) {
  const auto model = train_on(train, train_provider, hyper, log);
  return evaluate(model, cond, test, test_provider);
}

inline EvaluationReport run_condition(const Condition& cond, std::span<const BLMInstance> train,
                                      std::span<const BLMInstance> test, const EmbeddingProvider& provider,
                                      const ProbeHyper& hyper, TrainingLog* log = nullptr) {
  return run_condition(cond, train, test, provider, provider, hyper, log);
}

struct AggregatedTTest {
  std::string grouping;
  std::vector<std::string> group_a, group_b;
  std::vector<double> scores_a, scores_b;
  TTestResult result;
};

inline constexpr std::string_view kAggregatedGrouping =
    "synthetic-trained (SynSyn, SynNat) vs natural-trained (NatNat, NatSyn), pooled over languages; "
    "most plausible reading of an unstated grouping";

// The preconfigured comparison: F1 of every synthetic-trained condition
// against every natural-trained one. Needs at least two of each.
inline AggregatedTTest aggregated_t_test(std::span<const EvaluationReport> reports) {
  AggregatedTTest out;
  out.grouping = kAggregatedGrouping;
  for (const auto& r : reports) {
    const std::string label = to_string(r.condition.language) + ":" + r.condition.name();
    if (r.condition.train_source == DataSource::Syn) {
      out.group_a.push_back(label);
      out.scores_a.push_back(r.f1);
    } else {
      out.group_b.push_back(label);
      out.scores_b.push_back(r.f1);
    }
  }
  out.result = t_test(out.scores_a, out.scores_b);
  return out;
}

inline nlohmann::ordered_json report_to_json(const EvaluationReport& r, bool with_predictions = true) {
  nlohmann::ordered_json j{{"name", r.condition.name()},
                           {"train", to_string(r.condition.train_source)},
                           {"test", to_string(r.condition.test_source)},
                           {"language", to_string(r.condition.language)},
                           {"provider", r.condition.provider_id},
                           {"f1", r.f1},
                           {"accuracy", r.accuracy},
                           {"macro_f1", r.macro_f1},
                           {"n_test", r.n_test}};
  auto& dist = j["error_distribution"] = nlohmann::ordered_json::object();
  for (const auto& [label, v] : r.error_distribution) dist[to_string(label)] = v;
  if (with_predictions) {
    auto& preds = j["predictions"] = nlohmann::ordered_json::array();
    for (const auto& p : r.predictions) {
      preds.push_back({{"instance_id", p.instance_id},
                       {"selected", p.selected},
                       {"correct", p.correct},
                       {"label", to_string(p.selected_label)}});
    }
  }
  return j;
}

// Lenient: only "name" and "f1" are required, so hand-written report files
// can be charted.
inline EvaluationReport report_from_json(const nlohmann::json& j) {
  EvaluationReport r;
  const auto lang = language_from_string(j.value("language", std::string("fr")));
  r.condition = condition_from_name(j.at("name").get<std::string>(), lang, j.value("provider", std::string()));
  r.f1 = j.at("f1").get<double>();
  r.accuracy = j.value("accuracy", r.f1);
  r.macro_f1 = j.value("macro_f1", 0.0);
  r.n_test = j.value("n_test", std::size_t{0});
  if (auto it = j.find("error_distribution"); it != j.end()) {
    for (const auto& [k, v] : it->items()) r.error_distribution[label_from_string(k)] = v.get<double>();
  }
  if (auto it = j.find("predictions"); it != j.end()) {
    for (const auto& p : *it) {
      r.predictions.push_back({p.at("instance_id").get<std::string>(), p.at("selected").get<int>(),
                               p.at("correct").get<int>(), label_from_string(p.at("label").get<std::string>())});
    }
  }
  return r;
}

inline nlohmann::ordered_json t_test_to_json(const AggregatedTTest& a) {
  nlohmann::ordered_json j{{"grouping", a.grouping},
                           {"group_a", a.group_a},
                           {"group_b", a.group_b},
                           {"scores_a", a.scores_a},
                           {"scores_b", a.scores_b},
                           {"df", a.result.df},
                           {"se", a.result.se}};
  if (a.result.degenerate) {
    j["t"] = a.result.t > 0 ? "+inf" : "-inf";
    j["degenerate"] = true;
  } else {
    j["t"] = a.result.t;
  }
  j["p"] = a.result.p;
  return j;
}

}  // namespace blm
