#pragma once

// CoNLL-U reader/writer. Only basic dependencies are modelled; multiword
// token ranges ("3-4") and empty nodes ("3.1") are carried as opaque lines
// so files round-trip byte-for-byte.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "blm/error.hpp"

namespace blm {

using Features = std::vector<std::pair<std::string, std::string>>;

struct Token {
  int id = 0;
  std::string form;
  std::string lemma = "_";
  std::string upos = "_";
  std::string xpos = "_";
  Features feats;
  int head = 0;
  std::string deprel = "_";
  std::string deps = "_";
  std::string misc = "_";

  // Value of a morphological feature, or nullptr.
  const std::string* feature(std::string_view key) const {
    for (const auto& [k, v] : feats) {
      if (k == key) return &v;
    }
    return nullptr;
  }

  friend bool operator==(const Token&, const Token&) = default;
};

// A line kept verbatim and re-emitted before tokens[before_token].
struct RawLine {
  std::size_t before_token = 0;
  std::string text;

  friend bool operator==(const RawLine&, const RawLine&) = default;
};

struct DepGraph {
  std::string sent_id;
  std::string text;
  std::vector<Token> tokens;
  std::vector<std::string> comments;  // verbatim, including the leading '#'
  std::vector<RawLine> raw_lines;     // multiword ranges and empty nodes

  std::size_t size() const { return tokens.size(); }

  // Tokens are 1-based and consecutive, so id -> index is a subtraction.
  const Token& token(int id) const { return tokens.at(static_cast<std::size_t>(id - 1)); }

  int root() const {
    for (const auto& t : tokens) {
      if (t.head == 0) return t.id;
    }
    return 0;
  }

  friend bool operator==(const DepGraph&, const DepGraph&) = default;
};

struct Treebank {
  std::string name;
  std::vector<DepGraph> graphs;

  friend bool operator==(const Treebank&, const Treebank&) = default;
};

namespace conllu_detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline Features parse_feats(std::string_view s, std::size_t line, std::size_t sent) {
  Features feats;
  if (s == "_") return feats;
  for (auto item : split(s, '|')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ParseError("malformed feature '" + std::string(item) + "'", line, sent);
    }
    feats.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
  }
  return feats;
}

inline std::string format_feats(const Features& feats) {
  if (feats.empty()) return "_";
  std::string out;
  for (const auto& [k, v] : feats) {
    if (!out.empty()) out += '|';
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

// Structural checks applied once a sentence block is complete.
inline void validate(const DepGraph& g, std::size_t line, std::size_t sent) {
  if (g.tokens.empty()) throw ParseError("sentence has no tokens", line, sent);
  const int n = static_cast<int>(g.tokens.size());
  int roots = 0;
  for (const auto& t : g.tokens) {
    if (t.head < 0 || t.head > n) {
      throw ParseError("token " + std::to_string(t.id) + " has head " + std::to_string(t.head) +
                           " outside the sentence",
                       line, sent);
    }
    if (t.head == t.id) {
      throw ParseError("token " + std::to_string(t.id) + " is its own head", line, sent);
    }
    if (t.head == 0) ++roots;
  }
  if (roots == 0) throw ParseError("sentence has no root", line, sent);
  if (roots > 1) {
    throw ParseError("sentence has " + std::to_string(roots) + " roots", line, sent);
  }
  // With one root and in-range heads, a cycle is the only remaining defect.
  std::vector<int> state(static_cast<std::size_t>(n) + 1, 0);  // 0 new, 1 on path, 2 done
  for (int start = 1; start <= n; ++start) {
    std::vector<int> path;
    int cur = start;
    while (cur != 0 && state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      cur = g.token(cur).head;
    }
    if (cur != 0 && state[cur] == 1) {
      throw ParseError("head cycle through token " + std::to_string(cur), line, sent);
    }
    for (int v : path) state[v] = 2;
  }
}

}  // namespace conllu_detail

// Parses a whole CoNLL-U stream. Throws ParseError with the 1-based line
// number and sentence ordinal of the offending block.
inline Treebank parse_conllu(std::istream& in, std::string name = {}) {
  using namespace conllu_detail;
  Treebank tb;
  tb.name = std::move(name);

  DepGraph cur;
  bool in_sentence = false;
  bool have_sent_id = false;
  bool have_text = false;
  std::size_t line_no = 0;
  std::size_t ordinal = 0;
  std::vector<std::string> seen_ids;

  auto finish = [&](std::size_t at_line) {
    if (!in_sentence) return;
    validate(cur, at_line, ordinal);
    if (!have_sent_id) cur.sent_id = std::to_string(ordinal);
    if (!have_text) {
      std::string joined;
      for (const auto& t : cur.tokens) {
        if (!joined.empty()) joined += ' ';
        joined += t.form;
      }
      cur.text = std::move(joined);
    }
    if (std::find(seen_ids.begin(), seen_ids.end(), cur.sent_id) != seen_ids.end()) {
      throw ParseError("duplicate sent_id '" + cur.sent_id + "'", at_line, ordinal);
    }
    seen_ids.push_back(cur.sent_id);
    tb.graphs.push_back(std::move(cur));
    cur = DepGraph{};
    in_sentence = false;
    have_sent_id = false;
    have_text = false;
  };

  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (line_no == 1 && raw.starts_with("\xEF\xBB\xBF")) raw.erase(0, 3);
    std::string_view line = raw;

    if (trim(line).empty()) {
      finish(line_no);
      continue;
    }
    if (!in_sentence) {
      in_sentence = true;
      ++ordinal;
    }
    if (line.front() == '#') {
      if (!cur.tokens.empty() || !cur.raw_lines.empty()) {
        throw ParseError("comment line inside token block", line_no, ordinal);
      }
      cur.comments.emplace_back(line);
      auto body = trim(line.substr(1));
      auto take = [&](std::string_view key, std::string& field, bool& flag) {
        if (!body.starts_with(key)) return;
        auto rest = trim(body.substr(key.size()));
        if (rest.empty() || rest.front() != '=') return;
        field = std::string(trim(rest.substr(1)));
        flag = true;
      };
      take("sent_id", cur.sent_id, have_sent_id);
      take("text", cur.text, have_text);
      continue;
    }

    const auto cols = split(line, '\t');
    if (cols.size() != 10) {
      throw ParseError("expected 10 tab-separated columns, found " + std::to_string(cols.size()),
                       line_no, ordinal);
    }
    if (cols[0].find('-') != std::string_view::npos || cols[0].find('.') != std::string_view::npos) {
      cur.raw_lines.push_back(RawLine{cur.tokens.size(), std::string(line)});
      continue;
    }

    Token t;
    if (!parse_int(cols[0], t.id) || t.id < 1) {
      throw ParseError("invalid token id '" + std::string(cols[0]) + "'", line_no, ordinal);
    }
    const int expected = static_cast<int>(cur.tokens.size()) + 1;
    if (t.id < expected) {
      throw ParseError("duplicate token id " + std::to_string(t.id), line_no, ordinal);
    }
    if (t.id != expected) {
      throw ParseError("token id " + std::to_string(t.id) + " out of sequence (expected " +
                           std::to_string(expected) + ")",
                       line_no, ordinal);
    }
    if (cols[1].empty()) throw ParseError("empty FORM", line_no, ordinal);
    t.form = cols[1];
    t.lemma = cols[2];
    t.upos = cols[3];
    t.xpos = cols[4];
    t.feats = parse_feats(cols[5], line_no, ordinal);
    if (!parse_int(cols[6], t.head)) {
      throw ParseError("non-integer HEAD '" + std::string(cols[6]) + "'", line_no, ordinal);
    }
    t.deprel = cols[7];
    t.deps = cols[8];
    t.misc = cols[9];
    cur.tokens.push_back(std::move(t));
  }
  finish(line_no + 1);
  return tb;
}

inline Treebank parse_conllu(std::string_view text, std::string name = {}) {
  std::istringstream in{std::string(text)};
  return parse_conllu(in, std::move(name));
}

inline Treebank read_conllu_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open treebank '" + path.string() + "'");
  return parse_conllu(in, path.stem().string());
}

inline void serialize_conllu(const DepGraph& g, std::ostream& out) {
  for (const auto& c : g.comments) out << c << '\n';
  auto raw = g.raw_lines.begin();
  for (std::size_t i = 0; i <= g.tokens.size(); ++i) {
    while (raw != g.raw_lines.end() && raw->before_token == i) {
      out << raw->text << '\n';
      ++raw;
    }
    if (i == g.tokens.size()) break;
    const auto& t = g.tokens[i];
    out << t.id << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << '\t' << t.xpos << '\t'
        << conllu_detail::format_feats(t.feats) << '\t' << t.head << '\t' << t.deprel << '\t'
        << t.deps << '\t' << t.misc << '\n';
  }
  out << '\n';
}

inline void serialize_conllu(const Treebank& tb, std::ostream& out) {
  for (const auto& g : tb.graphs) serialize_conllu(g, out);
}

inline std::string serialize_conllu(const Treebank& tb) {
  std::ostringstream out;
  serialize_conllu(tb, out);
  return out.str();
}

}  // namespace blm
