#pragma once

// Sentence embeddings for the probe. Providers are pure functions of their
// configuration and the sentence; stores hold precomputed vectors in the
// BLME binary format:
//
//   "BLME"  u8 version=1  u32 dim            (9-byte header, little endian)
//   repeated: u32 key_len, key bytes (UTF-8), dim x f32
//
// with metadata in a JSON sidecar next to the file (same basename, .json).

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "blm/error.hpp"
#include "blm/record.hpp"
#include "blm/rng.hpp"

namespace blm {

using EmbeddingVector = std::vector<float>;

inline constexpr std::size_t kDefaultEmbeddingDim = 768;

class EmbeddingMiss : public Error {
 public:
  explicit EmbeddingMiss(const std::string& sentence)
      : Error("embedding-miss", "no embedding for sentence \"" + sentence + "\""), sentence_(sentence) {}

  const std::string& sentence() const noexcept { return sentence_; }

 private:
  std::string sentence_;
};

template <typename A, typename B>
double dot(const A& a, const B& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return s;
}

template <typename A>
double l2_norm(const A& a) {
  return std::sqrt(dot(a, a));
}

// Cosine similarity; 0 when either vector has zero norm.
template <typename A, typename B>
double cosine(const A& a, const B& b) {
  const double na = l2_norm(a), nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dim = kDefaultEmbeddingDim) : dim_(dim) {
    if (dim_ == 0) throw InvalidArgument("embedding dimension must be positive");
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }

  void add(std::string key, EmbeddingVector v) {
    if (v.size() != dim_) {
      throw InvalidArgument("dimension mismatch: store has " + std::to_string(dim_) + ", vector has " +
                            std::to_string(v.size()));
    }
    for (float x : v) {
      if (!std::isfinite(x)) throw InvalidArgument("non-finite embedding for \"" + key + "\"");
    }
    if (index_.contains(key)) throw InvalidArgument("duplicate key \"" + key + "\"");
    index_.emplace(key, entries_.size());
    entries_.emplace_back(std::move(key), std::move(v));
  }

  bool contains(const std::string& key) const { return index_.contains(key); }

  const EmbeddingVector* find(const std::string& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? nullptr : &entries_[it->second].second;
  }

  const std::vector<std::pair<std::string, EmbeddingVector>>& entries() const { return entries_; }

  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

  friend bool operator==(const EmbeddingStore& a, const EmbeddingStore& b) {
    return a.dim_ == b.dim_ && a.entries_ == b.entries_ && a.metadata == b.metadata;
  }

 private:
  std::size_t dim_;
  std::vector<std::pair<std::string, EmbeddingVector>> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline std::filesystem::path sidecar_path(const std::filesystem::path& store_path) {
  auto p = store_path;
  return p.replace_extension(".json");
}

namespace embeddings_detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                              static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

// Returns false on clean EOF before any byte; throws on a partial read.
inline bool get_u32(std::istream& in, std::uint32_t& v, bool eof_ok, const std::string& what) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  if (in.gcount() == 0 && eof_ok) return false;
  if (in.gcount() != 4) throw FormatError("truncated BLME file: " + what);
  v = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
      (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  return true;
}

}  // namespace embeddings_detail

inline void save_store(const EmbeddingStore& store, const std::filesystem::path& path) {
  using embeddings_detail::put_u32;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write("BLME", 4);
  out.put(static_cast<char>(1));
  put_u32(out, static_cast<std::uint32_t>(store.dim()));
  for (const auto& [key, v] : store.entries()) {
    put_u32(out, static_cast<std::uint32_t>(key.size()));
    out.write(key.data(), static_cast<std::streamsize>(key.size()));
    for (float x : v) put_u32(out, std::bit_cast<std::uint32_t>(x));
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
  std::ofstream side(sidecar_path(path), std::ios::binary);
  if (!side) throw IoError("cannot write sidecar for '" + path.string() + "'");
  nlohmann::ordered_json meta = store.metadata;
  meta["dim"] = store.dim();
  meta["entries"] = store.size();
  side << meta.dump(2) << '\n';
}

inline EmbeddingStore load_store(const std::filesystem::path& path) {
  using embeddings_detail::get_u32;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open embedding store '" + path.string() + "'");
  std::array<char, 5> head{};
  in.read(head.data(), 5);
  if (in.gcount() != 5 || std::string_view(head.data(), 4) != "BLME") {
    throw FormatError("'" + path.string() + "' is not a BLME file (bad magic)");
  }
  if (head[4] != 1) throw FormatError("unsupported BLME version " + std::to_string(static_cast<int>(head[4])));
  std::uint32_t dim = 0;
  get_u32(in, dim, false, "header");
  if (dim == 0) throw FormatError("BLME file declares dim=0");

  EmbeddingStore store(dim);
  std::uint32_t key_len = 0;
  std::vector<unsigned char> buf(static_cast<std::size_t>(dim) * 4);
  while (get_u32(in, key_len, true, "record header")) {
    std::string key(key_len, '\0');
    in.read(key.data(), key_len);
    if (static_cast<std::uint32_t>(in.gcount()) != key_len) throw FormatError("truncated BLME file: key");
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size()) {
      throw FormatError("truncated BLME file: vector for \"" + key + "\"");
    }
    EmbeddingVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const std::uint32_t bits = static_cast<std::uint32_t>(buf[4 * i]) |
                                 (static_cast<std::uint32_t>(buf[4 * i + 1]) << 8) |
                                 (static_cast<std::uint32_t>(buf[4 * i + 2]) << 16) |
                                 (static_cast<std::uint32_t>(buf[4 * i + 3]) << 24);
      v[i] = std::bit_cast<float>(bits);
    }
    store.add(std::move(key), std::move(v));
  }
  if (std::ifstream side{sidecar_path(path), std::ios::binary}) {
    try {
      store.metadata = nlohmann::ordered_json::parse(side);
      store.metadata.erase("dim");
      store.metadata.erase("entries");
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("bad sidecar for '" + path.string() + "': " + e.what());
    }
  }
  return store;
}

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string id() const = 0;
  virtual std::size_t dim() const = 0;
  virtual EmbeddingVector embed(std::string_view text) const = 0;

  // Providers that look at more than the text (the structure oracle)
  // override this; everything else embeds the text.
  virtual EmbeddingVector embed_record(const SentenceRecord& r) const { return embed(r.text); }
};

class FileProvider : public EmbeddingProvider {
 public:
  explicit FileProvider(std::shared_ptr<const EmbeddingStore> store, std::string name = "file")
      : store_(std::move(store)), name_(std::move(name)) {}

  std::string id() const override { return name_; }
  std::size_t dim() const override { return store_->dim(); }

  EmbeddingVector embed(std::string_view text) const override {
    const std::string key(text);
    if (const auto* v = store_->find(key)) return *v;
    throw EmbeddingMiss(key);
  }

 private:
  std::shared_ptr<const EmbeddingStore> store_;
  std::string name_;
};

namespace embeddings_detail {

// Gaussian vector determined by (seed, key); unit-normalized when requested.
inline std::vector<double> seeded_gaussian(std::uint64_t seed, std::string_view key, std::size_t dim,
                                           bool unit) {
  Rng rng(splitmix64(seed ^ fnv1a64(key)));
  std::vector<double> v(dim);
  for (auto& x : v) x = standard_normal(rng);
  if (unit) {
    const double n = l2_norm(v);
    for (auto& x : v) x /= n;
  }
  return v;
}

inline EmbeddingVector to_float(const std::vector<double>& v) {
  return EmbeddingVector(v.begin(), v.end());
}

// Runs of letters/digits (any byte >= 0x80 counts as a letter) and single
// punctuation characters.
inline std::vector<std::string_view> word_tokens(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto wordish = [](unsigned char c) { return c >= 0x80 || std::isalnum(c); };
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
    } else if (wordish(c)) {
      const std::size_t start = i;
      while (i < text.size() && wordish(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back(text.substr(start, i - start));
    } else {
      out.push_back(text.substr(i, 1));
      ++i;
    }
  }
  return out;
}

}  // namespace embeddings_detail

// Bag-of-tokens embedding: every token maps to a seeded unit Gaussian
// vector; the sentence vector is their mean, renormalized.
class HashProvider : public EmbeddingProvider {
 public:
  explicit HashProvider(std::size_t dim = kDefaultEmbeddingDim, std::uint64_t seed = 0) : dim_(dim), seed_(seed) {
    if (dim_ == 0) throw InvalidArgument("hash provider needs dim > 0");
  }

  std::string id() const override { return "hash"; }
  std::size_t dim() const override { return dim_; }

  EmbeddingVector embed(std::string_view text) const override {
    const auto tokens = embeddings_detail::word_tokens(text);
    if (tokens.empty()) throw InvalidArgument("cannot hash-embed a sentence without tokens");
    std::vector<double> sum(dim_, 0.0);
    for (auto tok : tokens) {
      const auto v = embeddings_detail::seeded_gaussian(seed_, tok, dim_, true);
      for (std::size_t i = 0; i < dim_; ++i) sum[i] += v[i];
    }
    const double n = l2_norm(sum);
    for (auto& x : sum) x /= n;
    return embeddings_detail::to_float(sum);
  }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

// One independent random unit vector per distinct sentence: carries no
// information about structure or shared words.
class RandomProvider : public EmbeddingProvider {
 public:
  explicit RandomProvider(std::size_t dim = kDefaultEmbeddingDim, std::uint64_t seed = 0) : dim_(dim), seed_(seed) {
    if (dim_ == 0) throw InvalidArgument("random provider needs dim > 0");
  }

  std::string id() const override { return "random"; }
  std::size_t dim() const override { return dim_; }

  EmbeddingVector embed(std::string_view text) const override {
    return embeddings_detail::to_float(embeddings_detail::seeded_gaussian(seed_ ^ 0x5ca1ab1eULL, text, dim_, true));
  }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

struct OracleConfig {
  std::size_t dim = 64;
  double signal = 0.2;         // magnitude of the structure coordinates
  double sigma = 0.0;          // noise on every coordinate
  double lexical_sigma = 0.0;  // extra noise on the distractor coordinates only
  bool ablate_voice = false;   // zero the voice coordinate
  std::uint64_t seed = 0;
};

// Encodes the record's structure directly, with s = signal:
//   [0] voice (+s passive, -s active)   [1] arguments (+s two, -s one)
//   [2] type (+s question, -s decl)     [3] constant s
//   [4..dim) distractor coordinates, zero before noise.
// Noise is seeded by the sentence text, so repeated sentences embed alike.
// The default signal is small next to lexical noise of 0.5 per coordinate;
// at signal 1 such noise barely moves a probe trained on clean vectors.
class OracleProvider : public EmbeddingProvider {
 public:
  static constexpr std::size_t kFeatureDims = 4;

  explicit OracleProvider(OracleConfig cfg = {}) : cfg_(cfg) {
    if (cfg_.dim < kFeatureDims) throw InvalidArgument("oracle provider needs dim >= 4");
    if (cfg_.sigma < 0 || cfg_.lexical_sigma < 0) throw InvalidArgument("oracle noise must be >= 0");
    if (!(cfg_.signal > 0)) throw InvalidArgument("oracle signal must be > 0");
  }

  const OracleConfig& config() const { return cfg_; }

  std::string id() const override { return "oracle"; }
  std::size_t dim() const override { return cfg_.dim; }

  EmbeddingVector embed(std::string_view) const override {
    throw InvalidArgument("the oracle provider embeds records, not bare text");
  }

  EmbeddingVector embed_record(const SentenceRecord& r) const override {
    std::vector<double> v(cfg_.dim, 0.0);
    const double s = cfg_.signal;
    v[0] = r.structure.is_passive() ? s : -s;
    v[1] = r.structure.has_two_args() ? s : -s;
    v[2] = r.structure.is_question() ? s : -s;
    v[3] = s;
    if (cfg_.sigma > 0) {
      const auto n = embeddings_detail::seeded_gaussian(cfg_.seed, r.text, cfg_.dim, false);
      for (std::size_t i = 0; i < cfg_.dim; ++i) v[i] += cfg_.sigma * n[i];
    }
    if (cfg_.lexical_sigma > 0) {
      const auto n = embeddings_detail::seeded_gaussian(cfg_.seed ^ 0x1e71ca1ULL, r.text, cfg_.dim, false);
      for (std::size_t i = kFeatureDims; i < cfg_.dim; ++i) v[i] += cfg_.lexical_sigma * n[i];
    }
    if (cfg_.ablate_voice) v[0] = 0.0;
    return embeddings_detail::to_float(v);
  }

 private:
  OracleConfig cfg_;
};

// Builds a provider from a spec string:
//   hash[:DIM]   random[:DIM]   file:PATH
//   oracle:SIGMA[,lexical=S][,dim=D][,signal=X][,ablate=voice]
// Any spec may append ",seed=N".
inline std::unique_ptr<EmbeddingProvider> make_provider(std::string_view spec, std::uint64_t seed = 0) {
  std::string_view head = spec, opts;
  if (auto comma = spec.find(','); comma != std::string_view::npos) {
    head = spec.substr(0, comma);
    opts = spec.substr(comma + 1);
  }
  std::string_view kind = head, arg;
  if (auto colon = head.find(':'); colon != std::string_view::npos) {
    kind = head.substr(0, colon);
    arg = head.substr(colon + 1);
  }
  std::unordered_map<std::string, std::string> kv;
  while (!opts.empty()) {
    auto comma = opts.find(',');
    auto item = opts.substr(0, comma);
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InvalidArgument("bad provider option '" + std::string(item) + "'");
    kv[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    if (comma == std::string_view::npos) break;
    opts.remove_prefix(comma + 1);
  }
  auto number = [&](const std::string& s, const char* what) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw InvalidArgument(std::string("bad ") + what + " '" + s + "' in provider spec");
    }
  };
  if (auto it = kv.find("seed"); it != kv.end()) seed = static_cast<std::uint64_t>(number(it->second, "seed"));
  auto dim_or = [&](std::size_t fallback) {
    if (auto it = kv.find("dim"); it != kv.end()) return static_cast<std::size_t>(number(it->second, "dim"));
    if (!arg.empty()) return static_cast<std::size_t>(number(std::string(arg), "dim"));
    return fallback;
  };

  if (kind == "hash") return std::make_unique<HashProvider>(dim_or(kDefaultEmbeddingDim), seed);
  if (kind == "random") return std::make_unique<RandomProvider>(dim_or(kDefaultEmbeddingDim), seed);
  if (kind == "file") {
    if (arg.empty()) throw InvalidArgument("file provider needs a path: file:PATH");
    auto store = std::make_shared<const EmbeddingStore>(load_store(std::string(arg)));
    return std::make_unique<FileProvider>(std::move(store), "file:" + std::string(arg));
  }
  if (kind == "oracle") {
    OracleConfig cfg;
    cfg.seed = seed;
    if (!arg.empty()) cfg.sigma = number(std::string(arg), "sigma");
    if (auto it = kv.find("lexical"); it != kv.end()) cfg.lexical_sigma = number(it->second, "lexical");
    if (auto it = kv.find("dim"); it != kv.end()) cfg.dim = static_cast<std::size_t>(number(it->second, "dim"));
    if (auto it = kv.find("signal"); it != kv.end()) cfg.signal = number(it->second, "signal");
    if (auto it = kv.find("ablate"); it != kv.end()) {
      if (it->second != "voice") throw InvalidArgument("oracle can only ablate 'voice'");
      cfg.ablate_voice = true;
    }
    return std::make_unique<OracleProvider>(cfg);
  }
  throw InvalidArgument("unknown provider '" + std::string(spec) + "'");
}

}  // namespace blm
