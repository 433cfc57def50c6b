#pragma once

// The whole experiment from one JSON config: pools, datasets, probes,
// reports. Everything written lands under the output directory.
//
// {
//   "seed": 7,
//   "languages": ["fr", "it"],
//   "datasets": {"fr": {"natural": ["fr.conllu"], "lexicon": "lexicon_fr.json"}},
//   "build": {"n_instances": 2000, "split": 0.8, "strict": true},
//   "generate": {"n_per_structure": 500},
//   "providers": {"default": "oracle:0.05,dim=64"},
//   "hyper": {"epochs": 50},
//   "conditions": [{"name": "SynNat", "language": "fr", "provider": "default", "test_provider": "default"}]
// }
//
// Relative paths resolve against the config file. "conditions" defaults to
// all four conditions per language with the first provider. A dataset entry
// may give "natural_pools" / "synthetic_pools" (JSONL) instead of
// treebanks / lexicon.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "blm/conllu.hpp"
#include "blm/embeddings.hpp"
#include "blm/experiments.hpp"
#include "blm/instance.hpp"
#include "blm/manifest.hpp"
#include "blm/probe.hpp"
#include "blm/queries.hpp"
#include "blm/report.hpp"
#include "blm/synthetic.hpp"

#ifndef BLM_DATA_DIR
#define BLM_DATA_DIR "data"
#endif

namespace blm {

namespace fs = std::filesystem;

inline fs::path default_lexicon(Language lang) {
  return fs::path(BLM_DATA_DIR) / ("lexicon_" + to_string(lang) + ".json");
}

struct LanguageData {
  std::vector<fs::path> natural;           // CoNLL-U treebanks
  std::optional<fs::path> natural_pools;   // or pre-extracted pools
  std::optional<fs::path> lexicon;
  std::optional<fs::path> synthetic_pools;  // or imported/generated pools
};

struct ConditionSpec {
  std::string name;
  Language language = Language::FR;
  std::string provider;
  std::string test_provider;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::vector<Language> languages;
  std::map<Language, LanguageData> datasets;
  std::size_t n_instances = 2000;
  double split = 0.8;
  bool strict = true;
  std::size_t n_per_structure = 500;
  std::vector<std::pair<std::string, std::string>> providers;  // name -> spec, in config order
  ProbeHyper hyper;
  std::vector<ConditionSpec> conditions;
  fs::path source;  // config file, if any

  const std::string& provider_spec(const std::string& name) const {
    for (const auto& [n, spec] : providers) {
      if (n == name) return spec;
    }
    throw InvalidArgument("condition names unknown provider '" + name + "'");
  }
};

inline RunConfig config_from_json(const nlohmann::json& j, const fs::path& base_dir = {}) {
  RunConfig c;
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base_dir / p; };
  try {
    c.seed = j.value("seed", std::uint64_t{0});
    for (const auto& l : j.value("languages", std::vector<std::string>{"fr"})) {
      c.languages.push_back(language_from_string(l));
    }
    if (auto it = j.find("datasets"); it != j.end()) {
      for (const auto& [lang, d] : it->items()) {
        LanguageData ld;
        for (const auto& p : d.value("natural", std::vector<std::string>{})) ld.natural.push_back(resolve(p));
        if (d.contains("natural_pools")) ld.natural_pools = resolve(d.at("natural_pools").get<std::string>());
        if (d.contains("lexicon")) ld.lexicon = resolve(d.at("lexicon").get<std::string>());
        if (d.contains("synthetic_pools")) ld.synthetic_pools = resolve(d.at("synthetic_pools").get<std::string>());
        c.datasets[language_from_string(lang)] = std::move(ld);
      }
    }
    if (auto it = j.find("build"); it != j.end()) {
      c.n_instances = it->value("n_instances", c.n_instances);
      c.split = it->value("split", c.split);
      c.strict = it->value("strict", c.strict);
    }
    if (auto it = j.find("generate"); it != j.end()) c.n_per_structure = it->value("n_per_structure", c.n_per_structure);
    if (auto it = j.find("providers"); it != j.end()) {
      for (const auto& [name, spec] : it->items()) c.providers.emplace_back(name, spec.get<std::string>());
    }
    if (c.providers.empty()) c.providers.emplace_back("default", "hash");
    if (auto it = j.find("hyper"); it != j.end()) c.hyper = hyper_from_json(*it);
    if (auto it = j.find("conditions"); it != j.end()) {
      for (const auto& cj : *it) {
        ConditionSpec cs;
        cs.name = cj.at("name").get<std::string>();
        cs.language = language_from_string(cj.value("language", to_string(c.languages.front())));
        cs.provider = cj.value("provider", c.providers.front().first);
        cs.test_provider = cj.value("test_provider", cs.provider);
        condition_from_name(cs.name, cs.language);
        c.conditions.push_back(std::move(cs));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad run config: ") + e.what());
  }
  if (c.conditions.empty()) {
    for (auto lang : c.languages) {
      for (const auto& [tr, te] : kConditionPairs) {
        const Condition cond{tr, te, lang, {}};
        c.conditions.push_back({cond.name(), lang, c.providers.front().first, c.providers.front().first});
      }
    }
  }
  return c;
}

inline RunConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("config '" + path.string() + "' is not valid JSON: " + std::string(e.what()));
  }
  auto c = config_from_json(j, path.parent_path());
  c.source = path;
  return c;
}

// BLM_SEED, when set, replaces the configured seed.
inline std::optional<std::uint64_t> seed_from_env() {
  const char* s = std::getenv("BLM_SEED");
  if (!s || !*s) return std::nullopt;
  char* end = nullptr;
  const auto v = std::strtoull(s, &end, 10);
  if (*end != '\0') throw InvalidArgument("BLM_SEED must be a non-negative integer");
  return v;
}

struct RunResult {
  std::vector<EvaluationReport> reports;
  std::optional<AggregatedTTest> t_test;
};

// report.json, f1.csv, errors.csv, one F1 chart per language and one error
// chart per condition. Returns the files written.
inline std::vector<fs::path> write_report_files(const RunResult& run, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<fs::path> written;
  auto put = [&](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write '" + p.string() + "'");
    out << text;
    written.push_back(p);
  };
  nlohmann::ordered_json j;
  j["conditions"] = nlohmann::ordered_json::array();
  for (const auto& r : run.reports) j["conditions"].push_back(report_to_json(r));
  if (run.t_test) j["t_test"] = t_test_to_json(*run.t_test);
  put(dir / "report.json", j.dump(2) + "\n");
  put(dir / "f1.csv", f1_csv(run.reports));
  put(dir / "errors.csv", errors_csv(run.reports));

  std::map<Language, std::vector<EvaluationReport>> by_lang;
  for (const auto& r : run.reports) by_lang[r.condition.language].push_back(r);
  for (const auto& [lang, rs] : by_lang) {
    put(dir / ("f1_" + to_string(lang) + ".svg"), f1_chart_svg(rs, "F1 " + to_string(lang)));
    for (const auto& r : rs) {
      put(dir / ("errors_" + to_string(lang) + "_" + r.condition.name() + ".svg"), error_chart_svg(r));
    }
  }
  return written;
}

inline RunResult read_report(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open report '" + path.string() + "'");
  RunResult run;
  try {
    const auto j = nlohmann::json::parse(in);
    for (const auto& c : j.at("conditions")) run.reports.push_back(report_from_json(c));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad report '" + path.string() + "': " + e.what());
  }
  return run;
}

inline bool can_t_test(std::span<const EvaluationReport> reports) {
  std::size_t syn = 0, nat = 0;
  for (const auto& r : reports) (r.condition.train_source == DataSource::Syn ? syn : nat) += 1;
  return syn >= 2 && nat >= 2;
}

namespace pipeline_detail {

inline std::uint64_t lang_stream(Language l) { return static_cast<std::uint64_t>(l); }

}  // namespace pipeline_detail

inline RunResult run_all(const RunConfig& cfg, const fs::path& out, RunManifest& manifest) {
  using pipeline_detail::lang_stream;
  fs::create_directories(out / "data");
  fs::create_directories(out / "models");
  if (!cfg.source.empty()) manifest.add_input(cfg.source);
  manifest.seeds["seed"] = cfg.seed;

  std::map<std::pair<Language, DataSource>, Dataset> datasets;
  auto need = [&](Language l, DataSource s) {
    for (const auto& c : cfg.conditions) {
      const auto cond = condition_from_name(c.name, c.language);
      if (c.language == l && (cond.train_source == s || cond.test_source == s)) return true;
    }
    return false;
  };

  for (auto lang : cfg.languages) {
    const std::string ls = to_string(lang);
    const LanguageData ld = cfg.datasets.contains(lang) ? cfg.datasets.at(lang) : LanguageData{};
    fs::create_directories(out / "data" / ls);

    for (auto src : {DataSource::Syn, DataSource::Nat}) {
      if (!need(lang, src)) continue;
      Pools pools;
      const std::string tag = src == DataSource::Syn ? "syn" : "nat";
      if (src == DataSource::Syn) {
        if (ld.synthetic_pools) {
          manifest.add_input(*ld.synthetic_pools);
          pools = read_pools({*ld.synthetic_pools});
        } else {
          const auto lex_path = ld.lexicon.value_or(default_lexicon(lang));
          manifest.add_input(lex_path);
          GenerateOptions g;
          g.n_per_structure = cfg.n_per_structure;
          g.seed = derive_seed(cfg.seed, 100 + lang_stream(lang));
          manifest.seeds["generate-" + ls] = g.seed;
          pools = generate_pools(load_lexicon(lex_path), g);
        }
      } else {
        if (ld.natural_pools) {
          manifest.add_input(*ld.natural_pools);
          pools = read_pools({*ld.natural_pools});
        } else {
          if (ld.natural.empty()) throw InvalidArgument("no natural data configured for language " + ls);
          std::vector<Treebank> tbs;
          for (const auto& p : ld.natural) {
            manifest.add_input(p);
            tbs.push_back(read_conllu_file(p));
          }
          pools = extract_pools(tbs, lang);
        }
      }
      const auto pools_path = out / "data" / ls / (tag + "_pools.jsonl");
      write_pools(pools_path, pools);
      manifest.add_output(pools_path);

      BuildOptions b;
      b.n_instances = cfg.n_instances;
      b.split = cfg.split;
      b.strict = cfg.strict;
      b.seed = derive_seed(cfg.seed, 200 + 10 * lang_stream(lang) + (src == DataSource::Syn ? 0 : 1));
      b.id_prefix = ls + "-" + tag;
      manifest.seeds["build-" + ls + "-" + tag] = b.seed;
      auto ds = build_dataset(pools, b);
      for (const auto& [split, items] : {std::pair{"train", &ds.train}, std::pair{"test", &ds.test}}) {
        const auto p = out / "data" / ls / (tag + "_" + split + ".jsonl");
        write_dataset(p, *items);
        manifest.add_output(p);
      }
      datasets[{lang, src}] = std::move(ds);
    }
  }

  const std::uint64_t provider_seed = derive_seed(cfg.seed, 300);
  const std::uint64_t probe_seed = derive_seed(cfg.seed, 400);
  manifest.seeds["provider"] = provider_seed;
  manifest.seeds["probe"] = probe_seed;
  std::map<std::string, std::unique_ptr<EmbeddingProvider>> providers;
  auto provider = [&](const std::string& name) -> const EmbeddingProvider& {
    auto it = providers.find(name);
    if (it == providers.end()) it = providers.emplace(name, make_provider(cfg.provider_spec(name), provider_seed)).first;
    return *it->second;
  };

  ProbeHyper hyper = cfg.hyper;
  hyper.seed = probe_seed;
  std::map<std::tuple<Language, DataSource, std::string>, fs::path> trained;
  RunResult run;
  for (const auto& cs : cfg.conditions) {
    Condition cond = condition_from_name(cs.name, cs.language, cs.provider);
    if (cs.test_provider != cs.provider) cond.provider_id += "/" + cs.test_provider;
    const std::string ls = to_string(cs.language);
    const auto key = std::tuple{cs.language, cond.train_source, cs.provider};
    if (!trained.contains(key)) {
      const auto& ds = datasets.at({cs.language, cond.train_source});
      const auto model = train_on(ds.train, provider(cs.provider), hyper);
      const auto p = out / "models" / (ls + "-" + to_string(cond.train_source) + "-" + cs.provider + ".ckpt");
      save_checkpoint(model, p);
      manifest.add_output(p);
      trained[key] = p;
    }
    // Evaluate the checkpoint as written, so reports depend only on files.
    const auto model = load_checkpoint(trained[key]);
    run.reports.push_back(evaluate(model, cond, datasets.at({cs.language, cond.test_source}).test,
                                   provider(cs.test_provider)));
  }
  if (can_t_test(run.reports)) run.t_test = aggregated_t_test(run.reports);
  for (const auto& p : write_report_files(run, out / "reports")) manifest.add_output(p);
  return run;
}

}  // namespace blm
