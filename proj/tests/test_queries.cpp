#include <gtest/gtest.h>

#include "blm/queries.hpp"
#include "blm/synthetic.hpp"
#include "pattern_oracle.hpp"
#include "test_util.hpp"

using namespace blm;
using blm::testing::data_dir;
using blm::testing::tok;

namespace {

std::string expected_comment(const DepGraph& g) {
  for (const auto& c : g.comments) {
    if (c.starts_with("# expected = ")) return c.substr(13);
  }
  return {};
}

std::string classified(const DepGraph& g) {
  auto st = classify_structure(g);
  return st ? to_string(*st) : "none";
}

}  // namespace

TEST(QueryTable, ReferenceRowsAreCarriedVerbatim) {
  const auto& act2q = query_row(kActTwoQ);
  EXPECT_EQ(act2q.pattern, R"(V -[nsubj]-> Ag; V-[obj]-> Pat; Q [form="?"])");
  EXPECT_EQ(act2q.without, "Y [upos=VERB]");
  const auto& pass1d = query_row(kPassOneD);
  EXPECT_EQ(pass1d.pattern, "V -[nsubj:pass]-> Pat");
  EXPECT_EQ(pass1d.without, R"(V-[obl:agent]-> Ag; Q [form="?"]; Y [upos="VERB"])");
}

TEST(QueryTable, EachWithoutClauseIsItsOwnBlock) {
  const auto& p = query_pattern(kPassOneD);
  EXPECT_EQ(p.without.size(), 3u);
  EXPECT_EQ(query_pattern(kActTwoQ).without.size(), 1u);
}

TEST(QueryTable, FixturesMatchTheirAnnotatedStructure) {
  for (const char* name : {"fr_fixture.conllu", "it_fixture.conllu"}) {
    const auto tb = read_conllu_file(data_dir() / name);
    std::size_t checked = 0;
    for (const auto& g : tb.graphs) {
      const auto want = expected_comment(g);
      ASSERT_FALSE(want.empty()) << g.sent_id;
      EXPECT_EQ(classified(g), want) << name << " " << g.sent_id << ": " << g.text;
      ++checked;
    }
    EXPECT_EQ(checked, tb.graphs.size());
  }
}

TEST(QueryTable, ExtractPoolTakesEachGraphOnce) {
  const auto tb = read_conllu_file(data_dir() / "fr_fixture.conllu");
  for (const auto& st : kAllStructures) {
    const auto pool = extract_pool(tb, st, Language::FR);
    std::set<std::string> ids;
    for (const auto& r : pool) {
      const auto& src = std::get<NaturalSource>(r.source);
      EXPECT_TRUE(ids.insert(src.sent_id).second);
      EXPECT_EQ(src.treebank, "fr_fixture");
      EXPECT_EQ(r.structure, st);
      EXPECT_TRUE(src.binding.count("V"));
    }
    EXPECT_FALSE(pool.empty()) << to_string(st);
  }
}

// Every natural record in a built pool classifies back to its pool.
TEST(QueryTable, PoolRecordsClassifyBack) {
  const auto tb = read_conllu_file(data_dir() / "fr_fixture.conllu");
  std::map<std::string, const DepGraph*> by_id;
  for (const auto& g : tb.graphs) by_id[g.sent_id] = &g;
  for (const auto& [st, pool] : extract_pools({tb}, Language::FR)) {
    for (const auto& r : pool) {
      const auto* g = by_id.at(std::get<NaturalSource>(r.source).sent_id);
      EXPECT_EQ(classify_structure(*g), st) << r.text;
    }
  }
}

TEST(QueryTable, AuxiliariesDoNotBlockPassives) {
  // "Les données ont été analysées."
  DepGraph g;
  g.tokens = {tok(1, "Les", "DET", 2, "det"),       tok(2, "données", "NOUN", 5, "nsubj:pass"),
              tok(3, "ont", "AUX", 5, "aux:tense"), tok(4, "été", "AUX", 5, "aux:pass"),
              tok(5, "analysées", "VERB", 0, "root"), tok(6, ".", "PUNCT", 5, "punct")};
  EXPECT_EQ(classify_structure(g), kPassOneD);
  g.tokens[3].upos = "VERB";
  EXPECT_EQ(classify_structure(g), std::nullopt);
}

TEST(QueryTable, NoVerbMeansNoStructure) {
  DepGraph g;
  g.tokens = {tok(1, "Oui", "INTJ", 0, "root"), tok(2, ".", "PUNCT", 1, "punct")};
  EXPECT_EQ(classify_structure(g), std::nullopt);
}

TEST(QueryTable, CopularTreebankYieldsEmptyPools) {
  // "Il est content." with the adjective as head, as UD annotates copulas.
  Treebank tb{"cop", {}};
  for (int i = 0; i < 3; ++i) {
    DepGraph g;
    g.sent_id = "c" + std::to_string(i);
    g.tokens = {tok(1, "Il", "PRON", 3, "nsubj"), tok(2, "est", "AUX", 3, "cop"),
                tok(3, "content", "ADJ", 0, "root"), tok(4, i ? "?" : ".", "PUNCT", 3, "punct")};
    tb.graphs.push_back(g);
  }
  for (const auto& [st, pool] : extract_pools({tb}, Language::FR)) EXPECT_TRUE(pool.empty()) << to_string(st);
}

TEST(QueryTable, ItalianAgentivePassiveClassifies) {
  LexiconEntry e{Language::IT, {"tifare", "tifa", "tifato", "tifata", "tifati", "tifate"},
                 {{"il", "bambino", Gender::Masc, Number::Sing}},
                 {{"la", "squadra", Gender::Fem, Number::Sing}}};
  const auto s = realize_sentence(e, e.agents[0], e.themes[0], kPassTwoD, Language::IT);
  EXPECT_EQ(s.record.text, "La squadra è tifata dal bambino.");
  EXPECT_EQ(classify_structure(s.gold), kPassTwoD);
}

TEST(QueryTable, GoldTreesOfGeneratedSentencesClassify) {
  for (auto lang : {Language::FR, Language::IT}) {
    const auto lex = load_lexicon(std::filesystem::path(BLM_DATA_DIR) / ("lexicon_" + to_string(lang) + ".json"));
    for (bool inversion : {false, true}) {
      if (inversion && lang != Language::FR) continue;
      GenerateOptions opt;
      opt.n_per_structure = 120;
      opt.seed = 5;
      opt.clitic_inversion = inversion;
      for (const auto& [st, sentences] : generate_sentences(lex, opt)) {
        for (const auto& s : sentences) {
          ASSERT_EQ(classify_structure(s.gold), st) << s.record.text;
          // The gold tree parses back from its own serialization.
          Treebank one{"gold", {s.gold}};
          ASSERT_EQ(parse_conllu(serialize_conllu(one)).graphs.at(0).tokens, s.gold.tokens);
        }
      }
    }
  }
}
