#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "blm/error.hpp"
#include "blm/structure.hpp"

namespace blm {

struct NaturalSource {
  std::string treebank;
  std::string sent_id;
  std::map<std::string, int> binding;  // first match, for provenance

  friend bool operator==(const NaturalSource&, const NaturalSource&) = default;
};

struct SyntheticSource {
  std::string generator;

  friend bool operator==(const SyntheticSource&, const SyntheticSource&) = default;
};

struct ImportedSource {
  std::string file;
  std::size_t line = 0;

  friend bool operator==(const ImportedSource&, const ImportedSource&) = default;
};

using Source = std::variant<NaturalSource, SyntheticSource, ImportedSource>;

struct SentenceRecord {
  std::string text;
  Language language = Language::FR;
  Source source;
  StructureType structure;

  bool is_natural() const { return std::holds_alternative<NaturalSource>(source); }

  friend bool operator==(const SentenceRecord&, const SentenceRecord&) = default;
};

using Pools = std::map<StructureType, std::vector<SentenceRecord>>;

inline nlohmann::ordered_json source_to_json(const Source& src) {
  nlohmann::ordered_json j;
  if (const auto* n = std::get_if<NaturalSource>(&src)) {
    j["kind"] = "natural";
    j["treebank"] = n->treebank;
    j["sent_id"] = n->sent_id;
    if (!n->binding.empty()) {
      nlohmann::ordered_json b = nlohmann::ordered_json::object();
      for (const auto& [var, id] : n->binding) b[var] = id;
      j["binding"] = std::move(b);
    }
  } else if (const auto* s = std::get_if<SyntheticSource>(&src)) {
    j["kind"] = "synthetic";
    j["generator"] = s->generator;
  } else {
    const auto& i = std::get<ImportedSource>(src);
    j["kind"] = "imported";
    j["file"] = i.file;
    j["line"] = i.line;
  }
  return j;
}

template <typename Json>
Source source_from_json(const Json& j) {
  const std::string kind = j.at("kind").template get<std::string>();
  if (kind == "natural") {
    NaturalSource n{j.at("treebank").template get<std::string>(),
                    j.at("sent_id").template get<std::string>(),
                    {}};
    if (j.contains("binding")) {
      for (const auto& [var, id] : j.at("binding").items()) n.binding[var] = id.template get<int>();
    }
    return n;
  }
  if (kind == "synthetic") return SyntheticSource{j.at("generator").template get<std::string>()};
  if (kind == "imported") {
    return ImportedSource{j.at("file").template get<std::string>(),
                          j.at("line").template get<std::size_t>()};
  }
  throw FormatError("unknown source kind '" + kind + "'");
}

inline nlohmann::ordered_json record_to_json(const SentenceRecord& r) {
  nlohmann::ordered_json j;
  j["text"] = r.text;
  j["language"] = to_string(r.language);
  j["structure"] = to_string(r.structure);
  j["source"] = source_to_json(r.source);
  return j;
}

template <typename Json>
SentenceRecord record_from_json(const Json& j, Language fallback = Language::FR) {
  SentenceRecord r;
  r.text = j.at("text").template get<std::string>();
  if (r.text.empty()) throw FormatError("sentence record with empty text");
  r.language = j.contains("language")
                   ? language_from_string(j.at("language").template get<std::string>())
                   : fallback;
  r.structure = structure_from_string(j.at("structure").template get<std::string>());
  r.source = source_from_json(j.at("source"));
  return r;
}

// Pools as JSONL, one SentenceRecord per line, in structure order.
inline void write_pools(const std::filesystem::path& path, const Pools& pools) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  for (const auto& st : kAllStructures) {
    auto it = pools.find(st);
    if (it == pools.end()) continue;
    for (const auto& r : it->second) out << record_to_json(r).dump() << '\n';
  }
}

inline void read_pools_into(const std::filesystem::path& path, Pools& pools) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open pools file '" + path.string() + "'");
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      auto r = record_from_json(nlohmann::json::parse(line));
      pools[r.structure].push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

inline Pools read_pools(const std::vector<std::filesystem::path>& paths) {
  Pools pools;
  for (const auto& p : paths) read_pools_into(p, pools);
  return pools;
}

}  // namespace blm
