#pragma once

// A small Grew-style graph query language over basic dependency trees.
//
//   V -[nsubj]-> Ag; V -[obj]-> Pat; Q [form="?"]
//   without { Y [upos=VERB] }
//
// Clauses are separated by ';'. Node clauses constrain token attributes
// (form, lemma, upos, or any morphological feature name); edge clauses
// require a dependency with exactly that relation label. Every `without`
// block is an independent negative condition: a match is discarded when the
// block can be satisfied with its fresh variables bound to tokens not used
// by the positive part. Matching is injective throughout.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "blm/conllu.hpp"
#include "blm/error.hpp"

namespace blm {

struct AttrConstraint {
  std::string key;
  std::string value;

  friend bool operator==(const AttrConstraint&, const AttrConstraint&) = default;
};

struct NodeConstraint {
  std::string var;
  std::vector<AttrConstraint> attrs;

  friend bool operator==(const NodeConstraint&, const NodeConstraint&) = default;
};

struct EdgeConstraint {
  std::string source;
  std::string relation;
  std::string target;

  friend bool operator==(const EdgeConstraint&, const EdgeConstraint&) = default;
};

struct PatternBody {
  std::vector<NodeConstraint> nodes;
  std::vector<EdgeConstraint> edges;

  bool empty() const { return nodes.empty() && edges.empty(); }

  // Variables in order of first mention.
  std::vector<std::string> variables() const {
    std::vector<std::string> vars;
    auto add = [&](const std::string& v) {
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    };
    for (const auto& n : nodes) add(n.var);
    for (const auto& e : edges) {
      add(e.source);
      add(e.target);
    }
    return vars;
  }

  friend bool operator==(const PatternBody&, const PatternBody&) = default;
};

struct Pattern {
  PatternBody positive;
  std::vector<PatternBody> without;

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct Binding {
  std::map<std::string, int> assignment;  // variable -> token id
  const DepGraph* graph = nullptr;

  int at(const std::string& var) const { return assignment.at(var); }
};

namespace pattern_detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Pattern parse() {
    Pattern p;
    skip_ws();
    if (at_end()) fail("empty pattern");
    bool any_clause = false;
    while (!at_end()) {
      if (peek_keyword("without")) {
        pos_ += 7;
        p.without.push_back(parse_block());
        any_clause = true;
      } else if (peek_keyword("pattern")) {
        pos_ += 7;
        merge(p.positive, parse_block());
        any_clause = true;
      } else {
        parse_clause(p.positive);
        any_clause = true;
      }
      skip_ws();
      while (!at_end() && src_[pos_] == ';') {
        ++pos_;
        skip_ws();
      }
    }
    if (!any_clause) fail("empty pattern");
    check_unique(p.positive);
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw PatternError(what, pos_); }

  bool at_end() const { return pos_ >= src_.size(); }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  bool peek_keyword(std::string_view kw) const {
    if (src_.substr(pos_, kw.size()) != kw) return false;
    std::size_t after = pos_ + kw.size();
    while (after < src_.size() && std::isspace(static_cast<unsigned char>(src_[after]))) ++after;
    return after < src_.size() && src_[after] == '{';
  }

  void expect(char c) {
    skip_ws();
    if (at_end() || src_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    if (at_end() || !(std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      fail("expected identifier");
    }
    while (!at_end() && ident_char(src_[pos_])) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  std::string value() {
    skip_ws();
    if (at_end()) fail("expected value");
    if (src_[pos_] == '"') {
      ++pos_;
      std::string out;
      while (!at_end() && src_[pos_] != '"') {
        if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) ++pos_;
        out += src_[pos_++];
      }
      if (at_end()) fail("unterminated string");
      ++pos_;
      return out;
    }
    const std::size_t start = pos_;
    while (!at_end() && src_[pos_] != ',' && src_[pos_] != ']' && src_[pos_] != '"' &&
           !std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    if (pos_ == start) fail("expected value");
    return std::string(src_.substr(start, pos_ - start));
  }

  PatternBody parse_block() {
    expect('{');
    PatternBody body;
    skip_ws();
    while (!at_end() && src_[pos_] != '}') {
      parse_clause(body);
      skip_ws();
      while (!at_end() && src_[pos_] == ';') {
        ++pos_;
        skip_ws();
      }
    }
    if (at_end()) fail("unterminated block");
    ++pos_;
    if (body.empty()) fail("empty block");
    check_unique(body);
    return body;
  }

  void parse_clause(PatternBody& body) {
    const std::size_t clause_start = pos_;
    std::string var = identifier();
    skip_ws();
    if (at_end()) fail("incomplete clause");
    if (src_[pos_] == '[') {
      ++pos_;
      NodeConstraint node{std::move(var), {}};
      skip_ws();
      if (!at_end() && src_[pos_] == ']') {
        ++pos_;
      } else {
        while (true) {
          std::string key = identifier();
          expect('=');
          node.attrs.push_back({std::move(key), value()});
          skip_ws();
          if (at_end()) fail("unterminated node constraint");
          if (src_[pos_] == ',') {
            ++pos_;
            continue;
          }
          if (src_[pos_] == ']') {
            ++pos_;
            break;
          }
          fail("expected ',' or ']'");
        }
      }
      body.nodes.push_back(std::move(node));
      return;
    }
    if (src_.substr(pos_, 2) == "-[") {
      pos_ += 2;
      const auto close = src_.find(']', pos_);
      if (close == std::string_view::npos) fail("unterminated relation");
      std::string_view rel = src_.substr(pos_, close - pos_);
      while (!rel.empty() && std::isspace(static_cast<unsigned char>(rel.front()))) rel.remove_prefix(1);
      while (!rel.empty() && std::isspace(static_cast<unsigned char>(rel.back()))) rel.remove_suffix(1);
      if (rel.empty()) fail("empty relation label");
      pos_ = close + 1;
      if (src_.substr(pos_, 2) != "->") fail("expected '->'");
      pos_ += 2;
      std::string target = identifier();
      body.edges.push_back({std::move(var), std::string(rel), std::move(target)});
      return;
    }
    pos_ = clause_start;
    fail("expected node clause 'X [...]' or edge clause 'X -[rel]-> Y'");
  }

  void check_unique(const PatternBody& body) const {
    for (std::size_t i = 0; i < body.nodes.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (body.nodes[i].var == body.nodes[j].var) {
          throw PatternError("duplicate node declaration '" + body.nodes[i].var + "'", pos_);
        }
      }
    }
  }

  static void merge(PatternBody& into, PatternBody from) {
    for (auto& n : from.nodes) into.nodes.push_back(std::move(n));
    for (auto& e : from.edges) into.edges.push_back(std::move(e));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

inline bool attr_matches(const Token& t, const AttrConstraint& a) {
  if (a.key == "form") return t.form == a.value;
  if (a.key == "lemma") return t.lemma == a.value;
  if (a.key == "upos") return t.upos == a.value;
  const std::string* v = t.feature(a.key);
  return v != nullptr && *v == a.value;
}

// A body lowered to variable indices. Variables [0, n_bound) are fixed on
// entry; the rest are searched.
struct CompiledBody {
  std::vector<std::string> vars;
  std::vector<std::vector<const AttrConstraint*>> attrs;
  struct Edge {
    std::size_t src;
    std::string_view rel;
    std::size_t tgt;
  };
  std::vector<Edge> edges;
  std::size_t n_bound = 0;
};

inline CompiledBody compile_body(const PatternBody& body, const std::vector<std::string>& bound) {
  CompiledBody c;
  c.vars = bound;
  c.n_bound = bound.size();
  auto index_of = [&](const std::string& v) {
    auto it = std::find(c.vars.begin(), c.vars.end(), v);
    if (it != c.vars.end()) return static_cast<std::size_t>(it - c.vars.begin());
    c.vars.push_back(v);
    return c.vars.size() - 1;
  };
  for (const auto& v : body.variables()) index_of(v);
  c.attrs.resize(c.vars.size());
  for (const auto& n : body.nodes) {
    auto& slot = c.attrs[index_of(n.var)];
    for (const auto& a : n.attrs) slot.push_back(&a);
  }
  for (const auto& e : body.edges) c.edges.push_back({index_of(e.source), e.relation, index_of(e.target)});
  return c;
}

class Matcher {
 public:
  explicit Matcher(const DepGraph& g) : g_(g), used_(g.size() + 1, false) {}

  // Calls `emit(assignment)` for every solution of `body` extending
  // `assignment[0, n_bound)`; stops early when emit returns false.
  template <typename Emit>
  bool search(const CompiledBody& body, std::vector<int>& assignment, Emit&& emit) {
    for (std::size_t i = 0; i < body.n_bound; ++i) {
      if (!node_ok(body, i, assignment[i])) return true;
    }
    for (const auto& e : body.edges) {
      if (e.src < body.n_bound && e.tgt < body.n_bound && !edge_ok(assignment[e.src], e.rel, assignment[e.tgt])) {
        return true;
      }
    }
    assignment.resize(body.vars.size(), 0);
    return extend(body, assignment, body.n_bound, emit);
  }

  void mark(int id, bool on) { used_[static_cast<std::size_t>(id)] = on; }

 private:
  bool node_ok(const CompiledBody& body, std::size_t var, int id) const {
    const Token& t = g_.token(id);
    for (const auto* a : body.attrs[var]) {
      if (!attr_matches(t, *a)) return false;
    }
    return true;
  }

  bool edge_ok(int src, std::string_view rel, int tgt) const {
    const Token& t = g_.token(tgt);
    return t.head == src && t.deprel == rel;
  }

  template <typename Emit>
  bool extend(const CompiledBody& body, std::vector<int>& assignment, std::size_t var, Emit& emit) {
    if (var == body.vars.size()) return emit(assignment);
    const int n = static_cast<int>(g_.size());
    for (int id = 1; id <= n; ++id) {
      if (used_[static_cast<std::size_t>(id)] || !node_ok(body, var, id)) continue;
      assignment[var] = id;
      bool ok = true;
      for (const auto& e : body.edges) {
        const bool touches = (e.src == var && e.tgt <= var) || (e.tgt == var && e.src <= var);
        if (touches && !edge_ok(assignment[e.src], e.rel, assignment[e.tgt])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used_[static_cast<std::size_t>(id)] = true;
      const bool go_on = extend(body, assignment, var + 1, emit);
      used_[static_cast<std::size_t>(id)] = false;
      if (!go_on) return false;
    }
    return true;
  }

  const DepGraph& g_;
  std::vector<bool> used_;
};

}  // namespace pattern_detail

inline Pattern compile_pattern(std::string_view source) {
  return pattern_detail::Parser(source).parse();
}

// All injective matches of `p` in `g`, sorted by variable name then token id.
inline std::vector<Binding> match_pattern(const DepGraph& g, const Pattern& p) {
  using namespace pattern_detail;
  const CompiledBody positive = compile_body(p.positive, {});
  std::vector<CompiledBody> negatives;
  negatives.reserve(p.without.size());
  for (const auto& w : p.without) negatives.push_back(compile_body(w, positive.vars));

  Matcher matcher(g);
  std::vector<Binding> out;
  std::vector<int> assignment;
  matcher.search(positive, assignment, [&](const std::vector<int>& a) {
    for (const auto& neg : negatives) {
      std::vector<int> inner(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(positive.vars.size()));
      bool fired = false;
      matcher.search(neg, inner, [&](const std::vector<int>&) {
        fired = true;
        return false;
      });
      if (fired) return true;
    }
    Binding b;
    b.graph = &g;
    for (std::size_t i = 0; i < positive.vars.size(); ++i) b.assignment.emplace(positive.vars[i], a[i]);
    out.push_back(std::move(b));
    return true;
  });
  std::sort(out.begin(), out.end(),
            [](const Binding& x, const Binding& y) { return x.assignment < y.assignment; });
  return out;
}

}  // namespace blm
