#pragma once

// Run manifests: what a command read and wrote, with content hashes.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "blm/error.hpp"

namespace blm {

inline std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("crypto", "sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

inline std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  const std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return sha256_hex(data);
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string command;
  std::string config_path;
  std::map<std::string, std::uint64_t> seeds;
  std::map<std::string, std::string> input_hashes;   // path -> sha256
  std::map<std::string, std::string> output_hashes;  // path -> sha256
  std::string started_at;
  std::string finished_at;

  void add_input(const std::filesystem::path& p) { input_hashes[p.string()] = sha256_file(p); }
  void add_output(const std::filesystem::path& p) { output_hashes[p.string()] = sha256_file(p); }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j{{"command", command}, {"config", config_path}};
    j["seeds"] = seeds;
    j["inputs"] = input_hashes;
    j["outputs"] = output_hashes;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    return j;
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << to_json().dump(2) << '\n';
  }
};

}  // namespace blm
