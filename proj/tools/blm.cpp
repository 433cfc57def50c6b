// blm: command-line driver for extraction, generation, dataset building,
// probing and reporting. Exit codes: 0 ok, 1 runtime error (JSON on
// stderr), 2 usage error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "blm/blm.hpp"

namespace fs = std::filesystem;
using namespace blm;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string lang = "fr";
  bool strict = true;
  std::string provider = "hash";
  std::string out;
};

std::uint64_t resolve_seed(const Globals& g, std::uint64_t configured = 0) {
  if (g.seed) return *g.seed;
  if (auto env = seed_from_env()) return *env;
  return configured;
}

fs::path out_dir(const Globals& g) {
  if (g.out.empty()) throw InvalidArgument("--out DIR is required");
  fs::create_directories(g.out);
  return g.out;
}

RunManifest start(const std::string& command, const Globals& g) {
  RunManifest m;
  m.command = command;
  m.config_path = g.config;
  m.started_at = utc_timestamp();
  return m;
}

void finish(RunManifest& m, const fs::path& dir) {
  m.finished_at = utc_timestamp();
  m.write(dir / "manifest.json");
}

void print_pool_counts(const Pools& pools) {
  for (const auto& st : kAllStructures) {
    auto it = pools.find(st);
    std::cout << to_string(st) << '\t' << (it == pools.end() ? 0 : it->second.size()) << '\n';
  }
}

// Reads datasets (instance JSONL) or pools (record JSONL), by line shape.
std::vector<SentenceRecord> read_sentences(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string first;
  std::getline(in, first);
  in.close();
  std::vector<SentenceRecord> out;
  if (!first.empty() && nlohmann::json::parse(first).contains("context")) {
    for (const auto& inst : read_dataset(path)) {
      for (const auto& r : inst.context) out.push_back(r);
      for (const auto& a : inst.answers) out.push_back(a.record);
    }
  } else {
    for (const auto& [st, pool] : read_pools({path})) out.insert(out.end(), pool.begin(), pool.end());
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Passive-alternation BLM toolkit: extract, generate, build, probe, report"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "JSON run config");
  app.add_option("--seed", g.seed, "global seed (overrides BLM_SEED and config)");
  app.add_option("--lang", g.lang, "language")->check(CLI::IsMember({"fr", "it"}));
  app.add_flag("--strict-split,!--no-strict-split", g.strict, "sentence-disjoint train/test (default on)");
  app.add_option("--provider", g.provider, "embedding provider: file:PATH, hash, random, oracle:SIGMA[,key=val]");
  app.add_option("--out", g.out, "output directory");

  // extract
  std::vector<std::string> treebanks;
  auto* extract = app.add_subcommand("extract", "extract natural pools from CoNLL-U treebanks");
  extract->add_option("treebanks", treebanks)->required()->check(CLI::ExistingFile);

  // generate
  std::string lexicon;
  std::size_t n_per_structure = 500;
  bool clitic_inversion = false;
  auto* generate = app.add_subcommand("generate", "generate synthetic pools from a lexicon");
  generate->add_option("--lexicon", lexicon, "lexicon JSON (default: shipped lexicon for --lang)");
  generate->add_option("--n-per-structure", n_per_structure)->check(CLI::PositiveNumber);
  generate->add_flag("--clitic-inversion", clitic_inversion, "French questions with subject-clitic inversion");

  // import
  std::vector<std::string> imports;
  auto* import = app.add_subcommand("import", "import sentence lists as pools");
  import->add_option("files", imports, "STRUCTURE=FILE, e.g. Pass-1-D=passives.txt")->required();

  // build
  std::vector<std::string> pool_files;
  std::size_t n_instances = 2000;
  double split = 0.8;
  std::string prefix;
  auto* build = app.add_subcommand("build", "assemble BLM instances into train/test JSONL");
  build->add_option("pools", pool_files, "pool JSONL files (default: generated synthetic pools)")
      ->check(CLI::ExistingFile);
  build->add_option("--n", n_instances)->check(CLI::PositiveNumber);
  build->add_option("--split", split)->check(CLI::Range(0.0, 1.0));
  build->add_option("--prefix", prefix, "instance id prefix");

  // embed-hash
  std::vector<std::string> embed_inputs;
  std::size_t dim = kDefaultEmbeddingDim;
  auto* embed_hash = app.add_subcommand("embed-hash", "write a BLME store of hash embeddings");
  embed_hash->add_option("inputs", embed_inputs, "dataset or pool JSONL files")->required()->check(CLI::ExistingFile);
  embed_hash->add_option("--dim", dim)->check(CLI::PositiveNumber);

  // train
  std::string train_file, hyper_json;
  ProbeHyper hyper;
  auto* train = app.add_subcommand("train", "train the probe");
  train->add_option("train", train_file)->required()->check(CLI::ExistingFile);
  train->add_option("--hyper", hyper_json, "JSON object of hyperparameters");
  train->add_option("--epochs", hyper.epochs);
  train->add_option("--hidden", hyper.hidden);
  train->add_option("--lr", hyper.learning_rate);
  train->add_option("--margin", hyper.margin);
  train->add_option("--batch", hyper.batch_size);

  // evaluate
  std::string model_file, test_file, condition_name = "SynSyn";
  auto* evaluate_cmd = app.add_subcommand("evaluate", "evaluate a trained probe");
  evaluate_cmd->add_option("test", test_file)->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--model", model_file)->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--condition", condition_name, "condition label, e.g. SynNat");

  // run-all
  auto* run_all_cmd = app.add_subcommand("run-all", "full pipeline from a config file");

  // report
  std::string report_file;
  auto* report = app.add_subcommand("report", "render SVG charts and CSV from a report JSON");
  report->add_option("report", report_file)->required()->check(CLI::ExistingFile);

  // query
  std::string pattern_file;
  std::vector<std::string> query_treebanks;
  auto* query = app.add_subcommand("query", "run a pattern over treebanks, JSONL to stdout");
  query->add_option("pattern", pattern_file)->required()->check(CLI::ExistingFile);
  query->add_option("treebanks", query_treebanks)->required()->check(CLI::ExistingFile);

  if (argc <= 1) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const Language lang = language_from_string(g.lang);

    if (*extract) {
      auto dir = out_dir(g);
      auto m = start("extract", g);
      std::vector<Treebank> tbs;
      for (const auto& p : treebanks) {
        m.add_input(p);
        tbs.push_back(read_conllu_file(p));
      }
      const auto pools = extract_pools(tbs, lang);
      write_pools(dir / "pools.jsonl", pools);
      m.add_output(dir / "pools.jsonl");
      print_pool_counts(pools);
      finish(m, dir);
    } else if (*generate) {
      auto dir = out_dir(g);
      auto m = start("generate", g);
      const fs::path lex_path = lexicon.empty() ? default_lexicon(lang) : fs::path(lexicon);
      m.add_input(lex_path);
      GenerateOptions opt;
      opt.n_per_structure = n_per_structure;
      opt.seed = resolve_seed(g);
      opt.clitic_inversion = clitic_inversion;
      m.seeds["seed"] = opt.seed;
      const auto pools = generate_pools(load_lexicon(lex_path), opt);
      write_pools(dir / "pools.jsonl", pools);
      m.add_output(dir / "pools.jsonl");
      print_pool_counts(pools);
      finish(m, dir);
    } else if (*import) {
      auto dir = out_dir(g);
      auto m = start("import", g);
      Pools pools;
      for (const auto& spec : imports) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) throw InvalidArgument("import expects STRUCTURE=FILE, got '" + spec + "'");
        const auto st = structure_from_string(spec.substr(0, eq));
        const fs::path file = spec.substr(eq + 1);
        m.add_input(file);
        auto recs = import_sentences(file, st, lang);
        auto& pool = pools[st];
        pool.insert(pool.end(), recs.begin(), recs.end());
      }
      write_pools(dir / "pools.jsonl", pools);
      m.add_output(dir / "pools.jsonl");
      print_pool_counts(pools);
      finish(m, dir);
    } else if (*build) {
      auto dir = out_dir(g);
      auto m = start("build", g);
      Pools pools;
      if (pool_files.empty()) {
        GenerateOptions opt;
        opt.seed = resolve_seed(g);
        m.add_input(default_lexicon(lang));
        pools = generate_pools(load_lexicon(default_lexicon(lang)), opt);
      } else {
        for (const auto& p : pool_files) {
          m.add_input(p);
          read_pools_into(p, pools);
        }
      }
      BuildOptions opt;
      opt.n_instances = n_instances;
      opt.split = split;
      opt.seed = resolve_seed(g);
      opt.strict = g.strict;
      opt.id_prefix = prefix;
      m.seeds["seed"] = opt.seed;
      const auto ds = build_dataset(pools, opt);
      write_dataset(dir / "train.jsonl", ds.train);
      write_dataset(dir / "test.jsonl", ds.test);
      m.add_output(dir / "train.jsonl");
      m.add_output(dir / "test.jsonl");
      std::cout << "train\t" << ds.train.size() << "\ntest\t" << ds.test.size() << '\n';
      finish(m, dir);
    } else if (*embed_hash) {
      auto dir = out_dir(g);
      auto m = start("embed-hash", g);
      const auto seed = resolve_seed(g);
      m.seeds["seed"] = seed;
      HashProvider hp(dim, seed);
      EmbeddingStore store(dim);
      store.metadata = {{"provider", "hash"}, {"seed", seed}, {"pooling", "mean of unit token vectors"}};
      for (const auto& p : embed_inputs) {
        m.add_input(p);
        for (const auto& r : read_sentences(p)) {
          if (!store.contains(r.text)) store.add(r.text, hp.embed(r.text));
        }
      }
      save_store(store, dir / "embeddings.blme");
      m.add_output(dir / "embeddings.blme");
      m.add_output(sidecar_path(dir / "embeddings.blme"));
      std::cout << "entries\t" << store.size() << "\ndim\t" << store.dim() << '\n';
      finish(m, dir);
    } else if (*train) {
      auto dir = out_dir(g);
      auto m = start("train", g);
      if (!hyper_json.empty()) hyper = hyper_from_json(nlohmann::json::parse(hyper_json), hyper);
      hyper.seed = resolve_seed(g);
      m.seeds["seed"] = hyper.seed;
      m.add_input(train_file);
      const auto provider = make_provider(g.provider, hyper.seed);
      const auto data = read_dataset(train_file);
      TrainingLog log;
      const auto model = train_on(data, *provider, hyper, &log);
      save_checkpoint(model, dir / "model.ckpt");
      nlohmann::ordered_json lj{{"mean_loss", log.mean_loss}, {"train_accuracy", log.train_accuracy}};
      std::ofstream(dir / "training_log.json", std::ios::binary) << lj.dump(2) << '\n';
      m.add_output(dir / "model.ckpt");
      m.add_output(dir / "training_log.json");
      if (!log.train_accuracy.empty()) std::cout << "train_accuracy\t" << log.train_accuracy.back() << '\n';
      finish(m, dir);
    } else if (*evaluate_cmd) {
      auto dir = out_dir(g);
      auto m = start("evaluate", g);
      const auto seed = resolve_seed(g);
      m.seeds["seed"] = seed;
      m.add_input(model_file);
      m.add_input(test_file);
      const auto model = load_checkpoint(model_file);
      const auto provider = make_provider(g.provider, seed);
      const auto test = read_dataset(test_file);
      RunResult run;
      run.reports.push_back(evaluate(model, condition_from_name(condition_name, lang, g.provider), test, *provider));
      for (const auto& p : write_report_files(run, dir)) m.add_output(p);
      std::cout << "f1\t" << run.reports.front().f1 << '\n';
      finish(m, dir);
    } else if (*run_all_cmd) {
      if (g.config.empty()) throw InvalidArgument("run-all needs --config");
      auto dir = out_dir(g);
      auto m = start("run-all", g);
      auto cfg = load_config(g.config);
      cfg.seed = resolve_seed(g, cfg.seed);
      if (g.strict == false) cfg.strict = false;
      const auto run = run_all(cfg, dir, m);
      for (const auto& r : run.reports) {
        std::cout << to_string(r.condition.language) << '\t' << r.condition.name() << "\tf1=" << r.f1 << '\n';
      }
      if (run.t_test) std::cout << "t(" << run.t_test->result.df << ") = " << run.t_test->result.t << '\n';
      finish(m, dir);
    } else if (*report) {
      auto dir = out_dir(g);
      auto m = start("report", g);
      m.add_input(report_file);
      auto run = read_report(report_file);
      if (can_t_test(run.reports)) run.t_test = aggregated_t_test(run.reports);
      for (const auto& p : write_report_files(run, dir)) m.add_output(p);
      finish(m, dir);
    } else if (*query) {
      std::ifstream pf(pattern_file, std::ios::binary);
      const std::string src{std::istreambuf_iterator<char>(pf), std::istreambuf_iterator<char>()};
      const auto pattern = compile_pattern(src);
      std::ofstream file_out;
      std::ostream* out = &std::cout;
      std::optional<RunManifest> m;
      if (!g.out.empty()) {
        auto dir = out_dir(g);
        m = start("query", g);
        m->add_input(pattern_file);
        file_out.open(dir / "matches.jsonl", std::ios::binary);
        out = &file_out;
      }
      for (const auto& p : query_treebanks) {
        if (m) m->add_input(p);
        const auto tb = read_conllu_file(p);
        for (const auto& graph : tb.graphs) {
          for (const auto& b : match_pattern(graph, pattern)) {
            nlohmann::ordered_json j{{"sent_id", graph.sent_id}, {"text", graph.text}};
            j["bindings"] = b.assignment;
            *out << j.dump() << '\n';
          }
        }
      }
      if (m) {
        file_out.close();
        m->add_output(fs::path(g.out) / "matches.jsonl");
        finish(*m, g.out);
      }
    }
  } catch (const Error& e) {
    std::cerr << nlohmann::json{{"error", e.kind()}, {"message", e.what()}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}
