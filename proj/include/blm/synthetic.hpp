#pragma once

// Rule-based realization of the eight template structures for French and
// Italian from a lexicon of transitive verbs, plus import of externally
// produced sentence lists. Every generated sentence comes with a gold
// dependency tree so generation can be checked against the extraction
// queries.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "blm/conllu.hpp"
#include "blm/error.hpp"
#include "blm/record.hpp"
#include "blm/rng.hpp"
#include "blm/structure.hpp"

namespace blm {

enum class Gender : std::uint8_t { Masc, Fem };
enum class Number : std::uint8_t { Sing, Plur };

struct NounPhrase {
  std::string det;  // "il", "l'", "les" ...
  std::string noun;
  Gender gender = Gender::Masc;
  Number number = Number::Sing;

  std::string surface() const {
    if (!det.empty() && det.back() == '\'') return det + noun;
    return det + " " + noun;
  }
};

struct VerbCells {
  std::string lemma;
  std::string active_3sg;
  std::string participle_masc_sg;
  std::string participle_fem_sg;
  std::string participle_masc_pl;
  std::string participle_fem_pl;

  const std::string& participle(Gender g, Number n) const {
    if (n == Number::Sing) return g == Gender::Masc ? participle_masc_sg : participle_fem_sg;
    return g == Gender::Masc ? participle_masc_pl : participle_fem_pl;
  }
};

struct LexiconEntry {
  Language language = Language::FR;
  VerbCells verb;
  std::vector<NounPhrase> agents;
  std::vector<NounPhrase> themes;
};

struct Lexicon {
  Language language = Language::FR;
  std::vector<LexiconEntry> entries;
};

struct RealizeOptions {
  std::size_t wh = 0;             // index into the language's wh-word set
  bool clitic_inversion = false;  // French "jette-t-il" questions
};

struct SyntheticSentence {
  SentenceRecord record;
  DepGraph gold;
};

inline constexpr std::string_view kGeneratorId = "blm-rules-1";

inline const std::vector<std::string>& wh_words(Language lang) {
  static const std::vector<std::string> fr{"Comment", "Quand", "Pourquoi"};
  static const std::vector<std::string> it{"Come", "Quando", "Perché"};
  if (lang == Language::FR) return fr;
  if (lang == Language::IT) return it;
  throw InvalidArgument("no realization rules for language '" + to_string(lang) + "'");
}

namespace synthetic_detail {

inline Gender gender_from(const std::string& s) {
  if (s == "m" || s == "masc") return Gender::Masc;
  if (s == "f" || s == "fem") return Gender::Fem;
  throw FormatError("bad gender '" + s + "'");
}

inline Number number_from(const std::string& s) {
  if (s == "sg" || s == "sing") return Number::Sing;
  if (s == "pl" || s == "plur") return Number::Plur;
  throw FormatError("bad number '" + s + "'");
}

inline NounPhrase np_from_json(const nlohmann::json& j) {
  NounPhrase np{j.at("det").get<std::string>(), j.at("noun").get<std::string>(),
                gender_from(j.at("gender").get<std::string>()),
                number_from(j.at("number").get<std::string>())};
  if (np.noun.empty() || np.det.empty()) throw FormatError("noun phrase with empty cell");
  if (np.noun.find(' ') != std::string::npos) {
    throw FormatError("noun '" + np.noun + "' must be a single word");
  }
  return np;
}

// Upper-cases the first letter; handles ASCII and the 2-byte Latin-1 range.
inline std::string capitalize(std::string s) {
  if (s.empty()) return s;
  auto c = static_cast<unsigned char>(s[0]);
  if (c >= 'a' && c <= 'z') {
    s[0] = static_cast<char>(c - 'a' + 'A');
  } else if (c == 0xC3 && s.size() > 1) {
    auto d = static_cast<unsigned char>(s[1]);
    if (d >= 0xA0 && d <= 0xBE && d != 0xB7) s[1] = static_cast<char>(d - 0x20);
  }
  return s;
}

// Sentence under construction: syntactic words with their attachment, and
// the surface spelling of each (which may fuse words, as in "dal").
class Builder {
 public:
  static constexpr int kVerb = -2;

  int add(std::string form, std::string lemma, std::string upos, std::string deprel, int head,
          std::string surface, bool glue = false) {
    words_.push_back({std::move(form), std::move(lemma), std::move(upos), std::move(deprel), head,
                      std::move(surface), glue});
    return static_cast<int>(words_.size()) - 1;
  }

  int add(const std::string& form, const std::string& lemma, const std::string& upos,
          const std::string& deprel, int head, bool glue = false) {
    return add(form, lemma, upos, deprel, head, form, glue);
  }

  void set_verb(int idx) { verb_ = idx; }

  std::string text() const {
    std::string out;
    for (const auto& w : words_) {
      if (w.surface.empty()) continue;
      if (!out.empty() && !w.glue && out.back() != '\'') out += ' ';
      out += w.surface;
    }
    return capitalize(out);
  }

  DepGraph graph(std::string sent_id) const {
    DepGraph g;
    g.sent_id = std::move(sent_id);
    g.text = text();
    g.comments = {"# sent_id = " + g.sent_id, "# text = " + g.text};
    for (std::size_t i = 0; i < words_.size(); ++i) {
      const auto& w = words_[i];
      Token t;
      t.id = static_cast<int>(i) + 1;
      t.form = w.form;
      t.lemma = w.lemma;
      t.upos = w.upos;
      t.deprel = w.deprel;
      if (static_cast<int>(i) == verb_) {
        t.head = 0;
      } else {
        t.head = (w.head == kVerb ? verb_ : w.head) + 1;
      }
      g.tokens.push_back(std::move(t));
    }
    return g;
  }

 private:
  struct Word {
    std::string form, lemma, upos, deprel;
    int head;
    std::string surface;
    bool glue;
  };
  std::vector<Word> words_;
  int verb_ = -1;
};

inline std::string it_agent_preposition(const std::string& det) {
  if (det == "il") return "dal";
  if (det == "lo") return "dallo";
  if (det == "la") return "dalla";
  if (det == "l'") return "dall'";
  if (det == "i") return "dai";
  if (det == "gli") return "dagli";
  if (det == "le") return "dalle";
  return {};
}

inline std::string fr_clitic(Gender g, Number n) {
  if (n == Number::Sing) return g == Gender::Masc ? "il" : "elle";
  return g == Gender::Masc ? "ils" : "elles";
}

// "-t-il" after a vowel-final verb, "-il" otherwise.
inline std::string fr_inverted_clitic(const std::string& host, Gender g, Number n) {
  const char last = host.empty() ? ' ' : host.back();
  return (last == 'e' || last == 'a' ? "-t-" : "-") + fr_clitic(g, n);
}

}  // namespace synthetic_detail

inline Lexicon lexicon_from_json(const nlohmann::json& j) {
  using namespace synthetic_detail;
  Lexicon lex;
  lex.language = language_from_string(j.value("language", std::string("fr")));
  for (const auto& e : j.at("entries")) {
    LexiconEntry entry;
    entry.language = e.contains("language") ? language_from_string(e.at("language").get<std::string>())
                                            : lex.language;
    const auto& v = e.at("verb");
    const auto& pp = v.at("past_participle");
    entry.verb = VerbCells{v.at("lemma").get<std::string>(), v.at("active_3sg").get<std::string>(),
                           pp.at("masc_sg").get<std::string>(), pp.at("fem_sg").get<std::string>(),
                           pp.at("masc_pl").get<std::string>(), pp.at("fem_pl").get<std::string>()};
    for (const auto& a : e.at("agents")) entry.agents.push_back(np_from_json(a));
    for (const auto& t : e.at("themes")) entry.themes.push_back(np_from_json(t));
    if (entry.agents.empty() || entry.themes.empty()) {
      throw FormatError("verb '" + entry.verb.lemma + "' needs at least one agent and one theme");
    }
    lex.entries.push_back(std::move(entry));
  }
  if (lex.entries.empty()) throw FormatError("lexicon has no entries");
  return lex;
}

inline Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon '" + path.string() + "'");
  try {
    return lexicon_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

// Realizes one sentence and its gold tree. Only the arguments the structure
// uses are read: the agent for active or two-argument rows, the theme for
// passive or two-argument rows.
inline SyntheticSentence realize_sentence(const LexiconEntry& entry, const NounPhrase& agent,
                                          const NounPhrase& theme, const StructureType& st,
                                          Language language, const RealizeOptions& opt = {},
                                          std::string sent_id = {}) {
  using namespace synthetic_detail;
  const auto& wh = wh_words(language);
  const VerbCells& v = entry.verb;
  Builder b;
  auto need = [&](const std::string& cell, const char* name) -> const std::string& {
    if (cell.empty()) throw InvalidArgument("verb '" + v.lemma + "' is missing cell " + name);
    return cell;
  };
  auto np = [&](const NounPhrase& p, const std::string& deprel) {
    const int det = b.add(p.det, p.det, "DET", "det", -1);
    const int noun = b.add(p.noun, p.noun, "NOUN", deprel, Builder::kVerb);
    return std::pair{det, noun};
  };
  std::vector<std::pair<int, int>> det_links;
  const bool fr = language == Language::FR;

  if (!st.is_passive()) {
    if (agent.number != Number::Sing) {
      throw InvalidArgument("agreement cell unavailable: verb '" + v.lemma +
                            "' has no plural active form for agent '" + agent.surface() + "'");
    }
    det_links.push_back(np(agent, "nsubj"));
    const std::string& form = need(v.active_3sg, "active_3sg");
    const int verb = b.add(form, v.lemma, "VERB", "root", -1);
    b.set_verb(verb);
    if (fr && st.is_question() && opt.clitic_inversion) {
      b.add(fr_inverted_clitic(form, agent.gender, agent.number), fr_clitic(agent.gender, agent.number), "PRON",
            "expl:subj", Builder::kVerb, true);
    }
    if (st.has_two_args()) det_links.push_back(np(theme, "obj"));
  } else {
    const bool agentive = st.has_two_args();
    if (st.is_question()) b.add(wh[opt.wh % wh.size()], wh[opt.wh % wh.size()], "ADV", "advmod", Builder::kVerb);
    det_links.push_back(np(theme, "nsubj:pass"));
    const bool plural = theme.number == Number::Plur;
    const bool invert = fr && st.is_question() && opt.clitic_inversion;
    const std::string clitic_host = [&] {
      if (agentive) return std::string(plural ? (fr ? "sont" : "sono") : (fr ? "est" : "è"));
      return std::string(plural ? (fr ? "ont" : "sono") : (fr ? "a" : "è"));
    }();
    // Agentive passives use the present, agentless ones the compound past.
    if (agentive) {
      b.add(clitic_host, fr ? "être" : "essere", "AUX", "aux:pass", Builder::kVerb);
    } else if (fr) {
      b.add(clitic_host, "avoir", "AUX", "aux:tense", Builder::kVerb);
    } else {
      b.add(clitic_host, "essere", "AUX", "aux", Builder::kVerb);
    }
    if (invert) {
      b.add(fr_inverted_clitic(clitic_host, theme.gender, theme.number), fr_clitic(theme.gender, theme.number),
            "PRON", "expl:subj", Builder::kVerb, true);
    }
    if (!agentive) {
      if (fr) {
        b.add("été", "être", "AUX", "aux:pass", Builder::kVerb);
      } else {
        static const VerbCells stato{"essere", "è", "stato", "stata", "stati", "state"};
        b.add(stato.participle(theme.gender, theme.number), "essere", "AUX", "aux:pass", Builder::kVerb);
      }
    }
    const std::string& part = v.participle(theme.gender, theme.number);
    const int verb = b.add(need(part, "past_participle"), v.lemma, "VERB", "root", -1);
    b.set_verb(verb);
    if (agentive) {
      if (fr) {
        const int prep = b.add("par", "par", "ADP", "case", -1);
        auto [det, noun] = np(agent, "obl:agent");
        det_links.push_back({prep, noun});
        det_links.push_back({det, noun});
      } else {
        const std::string fused = it_agent_preposition(agent.det);
        if (fused.empty()) {
          const int prep = b.add("da", "da", "ADP", "case", -1);
          auto [det, noun] = np(agent, "obl:agent");
          det_links.push_back({prep, noun});
          det_links.push_back({det, noun});
        } else {
          const int prep = b.add("da", "da", "ADP", "case", -1, fused);
          const int det = b.add(agent.det, agent.det, "DET", "det", -1, std::string());
          const int noun = b.add(agent.noun, agent.noun, "NOUN", "obl:agent", Builder::kVerb);
          det_links.push_back({prep, noun});
          det_links.push_back({det, noun});
        }
      }
    }
  }
  b.add(st.is_question() ? "?" : ".", st.is_question() ? "?" : ".", "PUNCT", "punct", Builder::kVerb, true);

  DepGraph gold = b.graph(std::move(sent_id));
  for (auto [dep, head] : det_links) {
    if (dep != head) gold.tokens[static_cast<std::size_t>(dep)].head = head + 1;
  }
  SentenceRecord rec{gold.text, language, SyntheticSource{std::string(kGeneratorId)}, st};
  return {std::move(rec), std::move(gold)};
}

inline SentenceRecord realize(const LexiconEntry& entry, const NounPhrase& agent, const NounPhrase& theme,
                              const StructureType& st, Language language, const RealizeOptions& opt = {}) {
  return realize_sentence(entry, agent, theme, st, language, opt).record;
}

struct GenerateOptions {
  std::size_t n_per_structure = 500;
  std::uint64_t seed = 0;
  bool clitic_inversion = false;
};

// Samples distinct (verb, agent, theme, wh) combinations per structure.
inline std::map<StructureType, std::vector<SyntheticSentence>> generate_sentences(const Lexicon& lex,
                                                                                  const GenerateOptions& opt) {
  if (lex.entries.empty()) throw InvalidArgument("lexicon is empty");
  if (opt.n_per_structure < 1) throw InvalidArgument("n_per_structure must be >= 1");
  const Language lang = lex.language;
  const std::size_t n_wh = wh_words(lang).size();

  std::map<StructureType, std::vector<SyntheticSentence>> out;
  for (const auto& st : kAllStructures) {
    const bool use_agent = !st.is_passive() || st.has_two_args();
    const bool use_theme = st.is_passive() || st.has_two_args();
    const std::size_t wh_count = st.is_passive() && st.is_question() ? n_wh : 1;

    std::vector<std::size_t> offsets{0};
    for (const auto& e : lex.entries) {
      const std::size_t combos =
          (use_agent ? e.agents.size() : 1) * (use_theme ? e.themes.size() : 1) * wh_count;
      offsets.push_back(offsets.back() + combos);
    }
    const std::size_t total = offsets.back();
    if (total < opt.n_per_structure) {
      throw Error("capacity", "lexicon supports only " + std::to_string(total) + " combinations for " +
                                  to_string(st) + ", " + std::to_string(opt.n_per_structure) + " requested");
    }

    Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(st.index())));
    std::vector<std::size_t> order(total);
    for (std::size_t i = 0; i < total; ++i) order[i] = i;
    std::unordered_set<std::string> seen;
    auto& pool = out[st];
    for (std::size_t i = 0; i < total && pool.size() < opt.n_per_structure; ++i) {
      const std::size_t j = i + uniform_index(rng, total - i);
      std::swap(order[i], order[j]);
      std::size_t c = order[i];
      const auto e_idx = static_cast<std::size_t>(
          std::upper_bound(offsets.begin(), offsets.end(), c) - offsets.begin() - 1);
      const auto& e = lex.entries[e_idx];
      c -= offsets[e_idx];
      const std::size_t wh = c % wh_count;
      c /= wh_count;
      std::size_t theme = 0, agent = 0;
      if (use_theme) {
        theme = c % e.themes.size();
        c /= e.themes.size();
      }
      if (use_agent) agent = c % e.agents.size();

      RealizeOptions ro{wh, opt.clitic_inversion};
      char id[64];
      std::snprintf(id, sizeof id, "syn-%s-%s-%04zu", to_string(lang).c_str(), to_string(st).c_str(),
                    pool.size() + 1);
      auto s = realize_sentence(e, e.agents[agent], e.themes[theme], st, lang, ro, id);
      if (!seen.insert(s.record.text).second) continue;
      pool.push_back(std::move(s));
    }
    if (pool.size() < opt.n_per_structure) {
      throw Error("capacity", "lexicon yields only " + std::to_string(pool.size()) + " distinct sentences for " +
                                  to_string(st));
    }
  }
  return out;
}

inline Pools generate_pools(const Lexicon& lex, const GenerateOptions& opt) {
  Pools pools;
  for (auto& [st, sentences] : generate_sentences(lex, opt)) {
    auto& pool = pools[st];
    for (auto& s : sentences) pool.push_back(std::move(s.record));
  }
  return pools;
}

// One record per line, tagged with file/line provenance. Blank lines are an
// error; no other validation is done.
inline std::vector<SentenceRecord> import_sentences(const std::filesystem::path& path, const StructureType& st,
                                                    Language language) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::vector<SentenceRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (n == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (line.find_first_not_of(" \t") == std::string::npos) {
      throw FormatError(path.string() + ": line " + std::to_string(n) + " is empty");
    }
    out.push_back(SentenceRecord{line, language, ImportedSource{path.filename().string(), n}, st});
  }
  return out;
}

}  // namespace blm
