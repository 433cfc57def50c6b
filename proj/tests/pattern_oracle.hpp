#pragma once

// Exhaustive reference matcher and random graph/pattern generators, shared
// by the unit tests and the acceptance binary.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "blm/pattern.hpp"
#include "blm/rng.hpp"

namespace blm::testing {

using Assignment = std::map<std::string, int>;

inline bool naive_attr(const Token& t, const AttrConstraint& a) {
  if (a.key == "form") return t.form == a.value;
  if (a.key == "lemma") return t.lemma == a.value;
  if (a.key == "upos") return t.upos == a.value;
  for (const auto& [k, v] : t.feats) {
    if (k == a.key) return v == a.value;
  }
  return false;
}

inline bool body_holds(const DepGraph& g, const PatternBody& b, const Assignment& a) {
  for (const auto& n : b.nodes) {
    for (const auto& attr : n.attrs) {
      if (!naive_attr(g.token(a.at(n.var)), attr)) return false;
    }
  }
  for (const auto& e : b.edges) {
    const Token& t = g.token(a.at(e.target));
    if (t.head != a.at(e.source) || t.deprel != e.relation) return false;
  }
  return true;
}

// Calls f for every injective extension of `base` to `vars`, avoiding tokens
// already in `base`.
inline void for_each_injective(const DepGraph& g, const std::vector<std::string>& vars, Assignment base,
                               const std::function<void(const Assignment&)>& f) {
  std::vector<std::string> todo;
  for (const auto& v : vars) {
    if (!base.count(v)) todo.push_back(v);
  }
  std::set<int> used;
  for (const auto& [v, id] : base) used.insert(id);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == todo.size()) {
      f(base);
      return;
    }
    for (int id = 1; id <= static_cast<int>(g.size()); ++id) {
      if (used.count(id)) continue;
      used.insert(id);
      base[todo[i]] = id;
      rec(i + 1);
      base.erase(todo[i]);
      used.erase(id);
    }
  };
  rec(0);
}

inline std::set<Assignment> brute_force(const DepGraph& g, const Pattern& p) {
  std::set<Assignment> out;
  for_each_injective(g, p.positive.variables(), {}, [&](const Assignment& a) {
    if (!body_holds(g, p.positive, a)) return;
    for (const auto& w : p.without) {
      bool fires = false;
      for_each_injective(g, w.variables(), a, [&](const Assignment& full) {
        if (!fires && body_holds(g, w, full)) fires = true;
      });
      if (fires) return;
    }
    out.insert(a);
  });
  return out;
}

inline std::set<Assignment> as_set(const std::vector<Binding>& bs) {
  std::set<Assignment> out;
  for (const auto& b : bs) out.insert(b.assignment);
  return out;
}

namespace oracle_detail {

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  return xs[uniform_index(rng, xs.size())];
}

inline const std::vector<std::string> kUpos{"VERB", "NOUN", "AUX", "PUNCT", "DET"};
inline const std::vector<std::string> kForms{"?", ".", "a", "b"};
inline const std::vector<std::string> kRels{"nsubj", "obj", "det", "obl:agent", "nsubj:pass"};

}  // namespace oracle_detail

// Random tree with 1..max_tokens tokens over a small vocabulary so that
// constraints are frequently satisfiable.
inline DepGraph random_graph(Rng& rng, int max_tokens = 8) {
  using namespace oracle_detail;
  const int n = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(max_tokens)));
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
  shuffle(std::span<int>(order), rng);
  DepGraph g;
  g.tokens.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Token& t = g.tokens[static_cast<std::size_t>(order[static_cast<std::size_t>(k)] - 1)];
    t.id = order[static_cast<std::size_t>(k)];
    t.form = pick(rng, kForms);
    t.lemma = t.form;
    t.upos = pick(rng, kUpos);
    if (uniform_index(rng, 2) == 0) t.feats.push_back({"Number", uniform_index(rng, 2) ? "Sing" : "Plur"});
    t.head = k == 0 ? 0 : order[uniform_index(rng, static_cast<std::uint64_t>(k))];
    t.deprel = k == 0 ? "root" : pick(rng, kRels);
  }
  return g;
}

inline std::string random_clause(Rng& rng, const std::vector<std::string>& vars) {
  using namespace oracle_detail;
  const auto& x = pick(rng, vars);
  if (uniform_index(rng, 2) == 0) {
    return x + " -[" + pick(rng, kRels) + "]-> " + pick(rng, vars);
  }
  std::string s = x + " [";
  const auto n_attrs = uniform_index(rng, 3);
  for (std::uint64_t i = 0; i < n_attrs; ++i) {
    if (i) s += ", ";
    switch (uniform_index(rng, 3)) {
      case 0: s += "upos=" + pick(rng, kUpos); break;
      case 1: s += "form=\"" + pick(rng, kForms) + "\""; break;
      default: s += std::string("Number=") + (uniform_index(rng, 2) ? "Sing" : "Plur");
    }
  }
  return s + "]";
}

// Positive part over at most three variables (each declared by node clause
// at most once), plus at most one without block.
inline std::string random_pattern(Rng& rng) {
  std::vector<std::string> vars{"A", "B", "C"};
  vars.resize(1 + uniform_index(rng, 3));
  std::string src;
  std::set<std::string> declared;
  const auto n_clauses = 1 + uniform_index(rng, 3);
  for (std::uint64_t i = 0; i < n_clauses; ++i) {
    std::string c = random_clause(rng, vars);
    if (c.find(" [") != std::string::npos && !declared.insert(c.substr(0, 1)).second) continue;
    if (!src.empty()) src += "; ";
    src += c;
  }
  if (src.empty()) src = vars[0] + " []";
  if (uniform_index(rng, 2) == 0) {
    std::vector<std::string> wvars = vars;
    wvars.push_back("W");
    wvars.push_back("Y");
    std::string w;
    const auto n = 1 + uniform_index(rng, 2);
    std::set<std::string> wdecl;
    for (std::uint64_t i = 0; i < n; ++i) {
      std::string c = random_clause(rng, wvars);
      if (c.find(" [") != std::string::npos && !wdecl.insert(c.substr(0, 1)).second) continue;
      if (!w.empty()) w += "; ";
      w += c;
    }
    if (!w.empty()) src += " without { " + w + " }";
  }
  return src;
}

}  // namespace blm::testing
