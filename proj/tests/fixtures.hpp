#pragma once

// Generated pools and datasets shared by the probe, experiment and
// acceptance tests.

#include <filesystem>
#include <map>
#include <utility>

#include "blm/instance.hpp"
#include "blm/synthetic.hpp"

namespace blm::testing {

inline const Pools& generated_pools(Language lang, std::size_t n_per_structure, std::uint64_t seed = 11) {
  static std::map<std::tuple<Language, std::size_t, std::uint64_t>, Pools> cache;
  const auto key = std::make_tuple(lang, n_per_structure, seed);
  auto it = cache.find(key);
  if (it == cache.end()) {
    GenerateOptions opt;
    opt.n_per_structure = n_per_structure;
    opt.seed = seed;
    const auto lex = load_lexicon(std::filesystem::path(BLM_DATA_DIR) / ("lexicon_" + to_string(lang) + ".json"));
    it = cache.emplace(key, generate_pools(lex, opt)).first;
  }
  return it->second;
}

// Strict split of n instances built from 500-per-structure French pools.
inline Dataset synthetic_dataset(std::size_t n, std::uint64_t seed, double split = 0.8) {
  BuildOptions opt;
  opt.n_instances = n;
  opt.split = split;
  opt.seed = seed;
  return build_dataset(generated_pools(Language::FR, 500), opt);
}

}  // namespace blm::testing
