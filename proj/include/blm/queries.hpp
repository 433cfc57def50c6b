#pragma once

// The eight extraction queries, one per template structure, and the
// operations built on them: pool extraction and structure classification.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blm/conllu.hpp"
#include "blm/pattern.hpp"
#include "blm/record.hpp"
#include "blm/structure.hpp"

namespace blm {

struct QueryRow {
  std::string_view printed_label;  // row label as printed in the source table; see README
  StructureType structure;         // what the pattern actually selects
  std::string_view pattern;
  std::string_view without;        // ';'-separated, each clause its own negation
};

// Reference query table, verbatim. Rows 2, 3 and 6 carry labels that disagree with
// their patterns; the pattern columns are authoritative.
inline constexpr std::array<QueryRow, 8> kQueryTable{{
    {"2 Act Q", kActTwoQ, R"(V -[nsubj]-> Ag; V-[obj]-> Pat; Q [form="?"])", R"(Y [upos=VERB])"},
    {"1 Act Decl", kActTwoD, R"(V -[nsubj]-> Ag; V-[obj]-> Pat)", R"(Q [form="?"]; Y [upos="VERB"])"},
    {"2 Act Q", kActOneQ, R"(V -[nsubj]-> Ag; Q [form="?"])", R"(V-[obj]-> Pat; Y [upos="VERB"])"},
    {"1 Act Decl", kActOneD, R"(V -[nsubj]-> Ag)", R"(V-[obj]-> Pat; Q [form="?"]; Y [upos="VERB"])"},
    {"2 Pass Q", kPassTwoQ, R"(V -[nsubj:pass]-> Pat; V-[obl:agent]-> Ag; Q [form="?"])",
     R"(Y [upos="VERB"])"},
    {"1 Pass Decl", kPassTwoD, R"(V -[nsubj:pass]-> Pat; V-[obl:agent]-> Ag)",
     R"(Q [form="?"]; Y [upos="VERB"])"},
    {"1 Pass Q", kPassOneQ, R"(V -[nsubj:pass]-> Pat; Q [form="?"])",
     R"(V-[obl:agent]-> Ag; Y [upos="VERB"])"},
    {"1 Pass Decl", kPassOneD, R"(V -[nsubj:pass]-> Pat)",
     R"(V-[obl:agent]-> Ag; Q [form="?"]; Y [upos="VERB"])"},
}};

// V is the clause's single verb: the without-clause on Y forbids any other
// VERB token, so V itself must be one. AUX tokens never count.
inline constexpr std::string_view kVerbAnchor = R"(V [upos=VERB])";

inline const QueryRow& query_row(const StructureType& st) {
  for (const auto& row : kQueryTable) {
    if (row.structure == st) return row;
  }
  throw InvalidArgument("unknown structure type " + to_string(st));
}

// Full DSL source for a structure, with each listed without-clause as a
// separate block.
inline std::string query_source(const StructureType& st) {
  const auto& row = query_row(st);
  std::string src(kVerbAnchor);
  src += "; ";
  src += row.pattern;
  std::string_view rest = row.without;
  while (!rest.empty()) {
    const auto semi = rest.find(';');
    auto clause = rest.substr(0, semi);
    while (!clause.empty() && clause.front() == ' ') clause.remove_prefix(1);
    if (!clause.empty()) {
      src += " without { ";
      src += clause;
      src += " }";
    }
    if (semi == std::string_view::npos) break;
    rest.remove_prefix(semi + 1);
  }
  return src;
}

inline const Pattern& query_pattern(const StructureType& st) {
  static const std::array<Pattern, 8> compiled = [] {
    std::array<Pattern, 8> out;
    for (const auto& s : kAllStructures) out[static_cast<std::size_t>(s.index())] = compile_pattern(query_source(s));
    return out;
  }();
  query_row(st);
  return compiled[static_cast<std::size_t>(st.index())];
}

// One record per graph with at least one match, in treebank order.
inline std::vector<SentenceRecord> extract_pool(const Treebank& tb, const StructureType& st,
                                                Language language) {
  const Pattern& p = query_pattern(st);
  std::vector<SentenceRecord> out;
  for (const auto& g : tb.graphs) {
    auto matches = match_pattern(g, p);
    if (matches.empty()) continue;
    out.push_back(SentenceRecord{
        g.text, language, NaturalSource{tb.name, g.sent_id, std::move(matches.front().assignment)}, st});
  }
  return out;
}

inline Pools extract_pools(const std::vector<Treebank>& treebanks, Language language) {
  Pools pools;
  for (const auto& st : kAllStructures) {
    auto& pool = pools[st];
    for (const auto& tb : treebanks) {
      auto part = extract_pool(tb, st, language);
      pool.insert(pool.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
  }
  return pools;
}

// The unique structure whose query matches, or nullopt for zero or several.
inline std::optional<StructureType> classify_structure(const DepGraph& g) {
  std::optional<StructureType> found;
  for (const auto& st : kAllStructures) {
    if (match_pattern(g, query_pattern(st)).empty()) continue;
    if (found) return std::nullopt;
    found = st;
  }
  return found;
}

}  // namespace blm
