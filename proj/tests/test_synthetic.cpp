#include <gtest/gtest.h>

#include "blm/synthetic.hpp"
#include "test_util.hpp"

using namespace blm;
using blm::testing::data_dir;
using blm::testing::spit;
using blm::testing::TempDir;

namespace {

NounPhrase np(std::string det, std::string noun, Gender g = Gender::Masc, Number n = Number::Sing) {
  return {std::move(det), std::move(noun), g, n};
}

LexiconEntry fr_verb(std::string lemma, std::string act, std::string ms, std::string fs, std::string mp,
                     std::string fp) {
  return {Language::FR, {std::move(lemma), std::move(act), std::move(ms), std::move(fs), std::move(mp), std::move(fp)},
          {}, {}};
}

Lexicon shipped(Language lang) {
  return load_lexicon(std::filesystem::path(BLM_DATA_DIR) / ("lexicon_" + to_string(lang) + ".json"));
}

std::string say(const LexiconEntry& e, const NounPhrase& ag, const NounPhrase& th, StructureType st,
                RealizeOptions opt = {}) {
  return realize(e, ag, th, st, e.language, opt).text;
}

}  // namespace

TEST(Realize, ItalianAgentivePassive) {
  LexiconEntry e{Language::IT, {"tifare", "tifa", "tifato", "tifata", "tifati", "tifate"}, {}, {}};
  EXPECT_EQ(say(e, np("il", "bambino"), np("la", "squadra", Gender::Fem), kPassTwoD),
            "La squadra è tifata dal bambino.");
}

TEST(Realize, FrenchAgentlessPassiveAgreesInGenderAndNumber) {
  auto e = fr_verb("analyser", "analyse", "analysé", "analysée", "analysés", "analysées");
  EXPECT_EQ(say(e, np("le", "chercheur"), np("les", "données", Gender::Fem, Number::Plur), kPassOneD),
            "Les données ont été analysées.");
  EXPECT_EQ(say(e, np("le", "chercheur"), np("le", "texte"), kPassOneD), "Le texte a été analysé.");
}

TEST(Realize, ItalianIntransitiveUse) {
  LexiconEntry e{Language::IT, {"cucinare", "cucina", "cucinato", "cucinata", "cucinati", "cucinate"}, {}, {}};
  EXPECT_EQ(say(e, np("lo", "chef"), np("la", "pasta", Gender::Fem), kActOneD), "Lo chef cucina.");
  EXPECT_EQ(say(e, np("lo", "chef"), np("la", "pasta", Gender::Fem), kActTwoQ), "Lo chef cucina la pasta?");
}

TEST(Realize, ItalianAgentContractions) {
  LexiconEntry e{Language::IT, {"vedere", "vede", "visto", "vista", "visti", "viste"}, {}, {}};
  const auto th = np("la", "casa", Gender::Fem);
  const std::vector<std::pair<NounPhrase, std::string>> cases{
      {np("il", "ragazzo"), "dal ragazzo"},
      {np("la", "ragazza", Gender::Fem), "dalla ragazza"},
      {np("lo", "studente"), "dallo studente"},
      {np("l'", "amico"), "dall'amico"},
      {np("i", "ragazzi", Gender::Masc, Number::Plur), "dai ragazzi"},
      {np("le", "ragazze", Gender::Fem, Number::Plur), "dalle ragazze"},
      {np("gli", "studenti", Gender::Masc, Number::Plur), "dagli studenti"},
  };
  for (const auto& [ag, phrase] : cases) {
    const auto text = say(e, ag, th, kPassTwoD);
    EXPECT_NE(text.find(" " + phrase + "."), std::string::npos) << text;
  }
}

// Sentences of the French synthetic example the rules can reach.
TEST(Realize, FrenchReferenceSentences) {
  auto jeter = fr_verb("jeter", "jette", "jeté", "jetée", "jetés", "jetées");
  EXPECT_EQ(say(jeter, np("le", "garçon"), np("la", "pierre", Gender::Fem), kActTwoQ, {0, true}),
            "Le garçon jette-t-il la pierre?");
  auto feliciter = fr_verb("féliciter", "félicite", "félicité", "félicitée", "félicités", "félicitées");
  EXPECT_EQ(say(feliciter, np("l'", "équipe", Gender::Fem), np("le", "gagnant"), kActTwoD),
            "L'équipe félicite le gagnant.");
  auto chanter = fr_verb("chanter", "chante", "chanté", "chantée", "chantés", "chantées");
  EXPECT_EQ(say(chanter, np("le", "chanteur"), np("la", "chanson", Gender::Fem), kActOneD), "Le chanteur chante.");
  auto ecrire = fr_verb("écrire", "écrit", "écrit", "écrite", "écrits", "écrites");
  EXPECT_EQ(say(ecrire, np("l'", "auteur"), np("un", "livre"), kPassTwoD), "Un livre est écrit par l'auteur.");
  auto recevoir = fr_verb("recevoir", "reçoit", "reçu", "reçue", "reçus", "reçues");
  EXPECT_EQ(say(recevoir, np("le", "client"), np("le", "colis"), kPassOneQ, {1, true}),
            "Quand le colis a-t-il été reçu?");
  auto composer = fr_verb("composer", "compose", "composé", "composée", "composés", "composées");
  EXPECT_EQ(say(composer, np("le", "musicien"), np("la", "musique", Gender::Fem), kPassOneQ, {1, true}),
            "Quand la musique a-t-elle été composée?");
}

TEST(Realize, DefaultQuestionsAreRisingIntonation) {
  auto jeter = fr_verb("jeter", "jette", "jeté", "jetée", "jetés", "jetées");
  EXPECT_EQ(say(jeter, np("le", "garçon"), np("la", "pierre", Gender::Fem), kActTwoQ), "Le garçon jette la pierre?");
  EXPECT_EQ(say(jeter, np("le", "garçon"), np("la", "pierre", Gender::Fem), kPassTwoQ, {2}),
            "Pourquoi la pierre est jetée par le garçon?");
}

TEST(Realize, Errors) {
  auto e = fr_verb("jeter", "jette", "jeté", "", "jetés", "jetées");
  EXPECT_THROW(say(e, np("le", "garçon"), np("la", "pierre", Gender::Fem), kPassOneD), InvalidArgument);
  EXPECT_THROW(say(e, np("les", "garçons", Gender::Masc, Number::Plur), np("le", "ballon"), kActOneD),
               InvalidArgument);
  LexiconEntry en{Language::EN, {"see", "sees", "seen", "seen", "seen", "seen"}, {}, {}};
  EXPECT_THROW(say(en, np("the", "boy"), np("the", "ball"), kActOneD), InvalidArgument);
}

TEST(Generate, MinimalLexiconGivesOneSentencePerStructure) {
  Lexicon lex{Language::FR, {fr_verb("jeter", "jette", "jeté", "jetée", "jetés", "jetées")}};
  lex.entries[0].agents = {np("le", "garçon")};
  lex.entries[0].themes = {np("la", "pierre", Gender::Fem)};
  GenerateOptions opt;
  opt.n_per_structure = 1;
  const auto pools = generate_pools(lex, opt);
  ASSERT_EQ(pools.size(), 8u);
  for (const auto& [st, pool] : pools) {
    ASSERT_EQ(pool.size(), 1u);
    EXPECT_EQ(pool[0].structure, st);
    EXPECT_EQ(std::get<SyntheticSource>(pool[0].source).generator, kGeneratorId);
  }
  opt.n_per_structure = 2;
  EXPECT_THROW(generate_pools(lex, opt), Error);
  EXPECT_THROW(generate_pools(Lexicon{}, opt), InvalidArgument);
}

TEST(Generate, ShippedLexiconsReachFiveHundredPerStructure) {
  for (auto lang : {Language::FR, Language::IT}) {
    const auto lex = shipped(lang);
    GenerateOptions opt;
    opt.n_per_structure = 500;
    opt.seed = 1;
    const auto sentences = generate_sentences(lex, opt);
    ASSERT_EQ(sentences.size(), 8u);
    for (const auto& [st, pool] : sentences) {
      ASSERT_EQ(pool.size(), 500u) << to_string(st);
      std::set<std::string> texts;
      for (const auto& s : pool) {
        const auto& text = s.record.text;
        ASSERT_TRUE(texts.insert(text).second) << text;
        ASSERT_EQ(text.back(), st.is_question() ? '?' : '.') << text;
        if (st.is_passive()) {
          // an auxiliary token and the lexicon's participle for the theme
          bool aux = false, participle = false;
          for (const auto& t : s.gold.tokens) {
            aux |= t.upos == "AUX";
            if (t.upos == "VERB") {
              for (const auto& e : lex.entries) {
                if (e.verb.lemma != t.lemma) continue;
                for (auto g : {Gender::Masc, Gender::Fem}) {
                  for (auto n : {Number::Sing, Number::Plur}) participle |= e.verb.participle(g, n) == t.form;
                }
              }
            }
          }
          ASSERT_TRUE(aux && participle) << text;
        }
      }
    }
  }
}

TEST(Generate, DeterministicUnderSeed) {
  const auto lex = shipped(Language::IT);
  GenerateOptions opt;
  opt.n_per_structure = 40;
  opt.seed = 9;
  const auto a = generate_pools(lex, opt), b = generate_pools(lex, opt);
  EXPECT_EQ(a, b);
  opt.seed = 10;
  EXPECT_NE(a, generate_pools(lex, opt));
}

TEST(Lexicon, RejectsMalformedEntries) {
  const auto entry = R"({"verb": {"lemma": "x", "active_3sg": "x",
      "past_participle": {"masc_sg": "a", "fem_sg": "b", "masc_pl": "c", "fem_pl": "d"}},
      "agents": [{"det": "le", "noun": "a", "gender": "m", "number": "sg"}],
      "themes": [{"det": "le", "noun": "b", "gender": "q", "number": "sg"}]})";
  EXPECT_THROW(lexicon_from_json(nlohmann::json::parse(std::string(R"({"language": "fr", "entries": [)") + entry + "]}")),
               FormatError);
  EXPECT_THROW(lexicon_from_json(nlohmann::json::parse(R"({"language": "fr", "entries": []})")), FormatError);
  EXPECT_THROW(load_lexicon(data_dir() / "missing.json"), IoError);
}

TEST(Import, LineNumbersAndBlankLines) {
  TempDir dir("import");
  spit(dir / "three.txt", "Un.\nDeux.\nTrois.\n");
  const auto recs = import_sentences(dir / "three.txt", kActOneD, Language::FR);
  ASSERT_EQ(recs.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(std::get<ImportedSource>(recs[i].source).line, i + 1);
    EXPECT_EQ(std::get<ImportedSource>(recs[i].source).file, "three.txt");
  }
  spit(dir / "gap.txt", "Un.\n\nTrois.\n");
  try {
    import_sentences(dir / "gap.txt", kActOneD, Language::FR);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(import_sentences(dir / "none.txt", kActOneD, Language::FR), IoError);
}

TEST(Import, FrenchSampleColumnReproduced) {
  const std::map<std::string, std::vector<std::string>> sample{
      {"Act-2-Q", {"Le garçon jette-t-il la pierre?"}},
      {"Act-2-D", {"L'équipe félicite le gagnant.", "Le parent paie la facture."}},
      {"Act-1-Q", {"L'équipe coûte-t-elle?"}},
      {"Act-1-D", {"Le chanteur chante.", "Le programmeur code."}},
      {"Pass-2-Q", {"Comment la scène est-elle décrite par l'écrivain ?"}},
      {"Pass-2-D", {"Un livre est écrit par l'auteur.", "La langue est apprise par l'étudiant."}},
      {"Pass-1-Q", {"Quand la musique a-t-elle été composée?", "Quand le colis a-t-il été reçu?"}},
      {"Pass-1-D", {"Les données ont été analysées."}},
  };
  for (const auto& [code, texts] : sample) {
    const auto st = structure_from_string(code);
    const auto recs = import_sentences(data_dir() / "sample_fr" / (code + ".txt"), st, Language::FR);
    ASSERT_EQ(recs.size(), texts.size()) << code;
    for (std::size_t i = 0; i < texts.size(); ++i) {
      EXPECT_EQ(recs[i], (SentenceRecord{texts[i], Language::FR, ImportedSource{code + ".txt", i + 1}, st}));
    }
  }
}

TEST(Pools, JsonlRoundTrip) {
  TempDir dir("pools");
  GenerateOptions opt;
  opt.n_per_structure = 5;
  const auto pools = generate_pools(shipped(Language::FR), opt);
  write_pools(dir / "p.jsonl", pools);
  EXPECT_EQ(read_pools({dir / "p.jsonl"}), pools);
}
